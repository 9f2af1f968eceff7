"""Deterministic randomized trial runner shared by every audit.

Each (trial index, check name) pair gets its own generator seeded from
``mix(seed, index, name)``, so reports do not depend on scheduling.
"""

import hashlib
import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor


def mix(seed, *parts):
    """Derive a 64-bit seed from ``seed`` and any printable parts."""
    data = json.dumps([int(seed)] + [str(p) for p in parts]).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


class CheckFailed(Exception):
    pass


class Trial:
    """Per-trial context handed to a check function."""

    __slots__ = ("status", "counters", "message", "diagram")

    def __init__(self):
        self.status = "pass"
        self.counters = Counter()
        self.message = None
        self.diagram = None

    def vacuous(self):
        if self.status == "pass":
            self.status = "vacuous"

    def count(self, key, n=1):
        self.counters[key] += n

    def fail(self, message, **diagram):
        self.status = "fail"
        self.message = message
        self.diagram = diagram
        raise CheckFailed(message)

    def require(self, cond, message, **diagram):
        if not cond:
            self.fail(message, **diagram)


def _run_one(fn, payload, seed, index, name):
    from .cgw.core import describe

    t = Trial()
    rng = random.Random(mix(seed, index, name))
    try:
        fn(payload, rng, t)
    except CheckFailed:
        pass
    except Exception as exc:  # an unexpected error is a failure of the check
        t.status = "fail"
        t.message = f"{type(exc).__name__}: {exc}"
        t.diagram = {}
    diagram = None
    if t.status == "fail":
        try:
            diagram = describe(t.diagram or {})
        except Exception:  # describing must never mask the failure itself
            diagram = {"repr": repr(t.diagram)}
    return (t.status, dict(t.counters), t.message, diagram)


def _run_chunk(args):
    checks, payload, seed, indices = args
    out = []
    for i in indices:
        for name, fn in checks:
            out.append((i, name, _run_one(fn, payload, seed, i, name)))
    return out


class AuditReport:
    """Per-check counts plus the first counterexample of each failing check."""

    def __init__(self, instance, seed, trials, names):
        self.instance = instance
        self.seed = seed
        self.trials = trials
        self.rows = {n: Counter(trials=0, failures=0, vacuous=0) for n in names}
        self.counterexamples = {}

    def add(self, index, name, result):
        status, counters, message, diagram = result
        row = self.rows[name]
        row["trials"] += 1
        if status == "fail":
            row["failures"] += 1
            if name not in self.counterexamples:
                self.counterexamples[name] = {"trial": index, "message": message, "diagram": diagram}
        elif status == "vacuous":
            row["vacuous"] += 1
        for k, v in counters.items():
            row[k] += v

    @property
    def ok(self):
        return all(r["failures"] == 0 for r in self.rows.values())

    def failures(self, name=None):
        if name is not None:
            return self.rows[name]["failures"]
        return sum(r["failures"] for r in self.rows.values())

    def to_json(self):
        return {
            "instance": self.instance,
            "seed": self.seed,
            "trials": self.trials,
            "checks": {n: dict(sorted(r.items())) for n, r in self.rows.items()},
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }

    def to_text(self):
        lines = [f"audit instance={self.instance} seed={self.seed} trials={self.trials}"]
        width = max([len(n) for n in self.rows] + [5])
        for n, r in self.rows.items():
            extra = " ".join(f"{k}={v}" for k, v in sorted(r.items()) if k not in ("trials", "failures", "vacuous"))
            status = "PASS" if r["failures"] == 0 else "FAIL"
            line = f"{status} {n:<{width}} trials={r['trials']} failures={r['failures']} vacuous={r['vacuous']}"
            lines.append(line + (" " + extra if extra else ""))
        for n, cx in self.counterexamples.items():
            lines.append(f"counterexample {n} trial={cx['trial']}: {cx['message']}")
            lines.append("  " + json.dumps(cx["diagram"], sort_keys=True))
        lines.append("result: " + ("all checks passed" if self.ok else f"{self.failures()} failures"))
        return "\n".join(lines)


def run_checks(checks, payload, trials, seed, jobs=1, instance=""):
    """Run every check ``trials`` times and merge by trial index."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    names = [n for n, _ in checks]
    report = AuditReport(instance, seed, trials, names)
    indices = list(range(trials))
    if jobs and jobs > 1:
        chunks = [indices[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_chunk, [(checks, payload, seed, c) for c in chunks if c]))
        results = sorted((r for part in parts for r in part), key=lambda r: (r[0], names.index(r[1])))
    else:
        results = _run_chunk((checks, payload, seed, indices))
    for i, name, res in results:
        report.add(i, name, res)
    return report
