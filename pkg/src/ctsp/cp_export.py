"""MiniZinc model text for an instance (emission only, no solver calls).

Run it externally with e.g. ``minizinc --solver cp-sat model.mzn``.
"""

from __future__ import annotations

from .instance import Instance, upper_bound


def emit_minizinc(inst: Instance) -> str:
    n, ub = inst.n, upper_bound(inst)
    tasks = 2 * n
    p = ", ".join(str(int(x)) for x in inst.durations)
    lines = [
        f"% coupled-task scheduling with exact delays, {n} jobs",
        'include "disjunctive.mzn";',
        "",
        f"int: UB = {ub};",
        f"array[1..{tasks}] of int: p = [{p}];",
        "",
        f"array[1..{tasks}] of var 0..UB: s;",
        "var 0..UB: Cmax;",
        "",
    ]
    for k, job in enumerate(inst.jobs, start=1):
        lines.append(f"constraint s[{2 * k}] = s[{2 * k - 1}] + {job.a + job.L};")
    lines += [
        "constraint disjunctive(s, p);",
        f"constraint Cmax = max(h in 1..{tasks})(s[h] + p[h]);",
        "",
        "solve minimize Cmax;",
    ]
    return "\n".join(lines) + "\n"
