"""Run every CLI suite at its default bounds and write one JSON report per suite.

    python scripts/run_all_suites.py --out reports/
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from repdiff.suites import PSU3_SUITES, SU_SUITES, Bounds


@dataclass(frozen=True)
class RunConfig:
    out: Path = Path("reports")
    ranks: tuple[int, ...] = (1, 2, 3)
    tor_degree: int = 6
    jobs: int = 1


def run(cfg: RunConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    failures = 0
    jobs = []
    for rank in cfg.ranks:
        for name, fn in SU_SUITES.items():
            degree = cfg.tor_degree if name == "tor" else Bounds.max_degree
            jobs.append((f"su{rank}_{name}", lambda fn=fn, rank=rank, degree=degree: fn(rank, Bounds(max_degree=degree, jobs=cfg.jobs))))
    for name, fn in PSU3_SUITES.items():
        jobs.append((f"psu3_{name}", lambda fn=fn: fn(Bounds(jobs=cfg.jobs))))
    for tag, job in jobs:
        t0 = time.perf_counter()
        report = job()
        (cfg.out / f"{tag}.json").write_text(report.to_json())
        failed = [c.name for c in report.checks if c.status == "fail"]
        failures += bool(failed)
        print(f"{tag:<20} {report.verdict:<5} {time.perf_counter() - t0:6.1f}s {' '.join(failed)}")
    return 1 if failures else 0


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=RunConfig.out)
    p.add_argument("--ranks", type=int, nargs="+", default=list(RunConfig.ranks))
    p.add_argument("--tor-degree", type=int, default=RunConfig.tor_degree)
    p.add_argument("--jobs", type=int, default=RunConfig.jobs)
    a = p.parse_args()
    return run(RunConfig(a.out, tuple(a.ranks), a.tor_degree, a.jobs))


if __name__ == "__main__":
    raise SystemExit(main())
