#!/usr/bin/env python3
"""Benchmark the formula evaluator: compiled core vs pure-Python fallback.

The stack machine is the hot kernel of dataset export and reward serving
(one evaluation per generated case, one per verification), so this is the
loop worth measuring.

Usage: python benchmarks/bench_engine.py [--iterations N]
"""

from __future__ import annotations

import argparse
import time
from array import array

from medcalc.engine import parse
from medcalc.engine import _stackvm_py
from medcalc.engine.program import compile_expr

FORMULAS = {
    "bmi": ("weight / height^2", {"weight": 80.0, "height": 1.75}),
    "osmolality": ("2*na + glu/18 + bun/2.8", {"na": 140.0, "glu": 99.0, "bun": 14.0}),
    "gfr": (
        "175 * scr^(-1.154) * age^(-0.203) * sex",
        {"scr": 1.1, "age": 54.0, "sex": 0.742},
    ),
    "fluids (nested if)": (
        "if(w <= 10, 100 * w, if(w <= 20, 1000 + 50 * (w - 10), 1500 + 20 * (w - 20)))",
        {"w": 24.0},
    ),
}


def backends():
    out = [("python", _stackvm_py.run_program)]
    try:
        from medcalc.engine import _stackvm

        out.insert(0, ("cython", _stackvm.run_program))
    except ImportError:
        print("note: compiled core not built; benchmarking the fallback only")
    return out


def bench(run_program, program, values, iterations: int) -> float:
    stack = array("d", bytes(8 * program.max_stack))
    ops, args, consts = program.ops, program.args, program.consts
    run_program(ops, args, consts, values, stack)  # warm up / sanity
    started = time.perf_counter()
    for _ in range(iterations):
        run_program(ops, args, consts, values, stack)
    return (time.perf_counter() - started) / iterations


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--iterations", type=int, default=200_000)
    opts = ap.parse_args()

    impls = backends()
    print(f"{'formula':<22} " + " ".join(f"{name + ' ns/op':>14}" for name, _ in impls) + "  speedup")
    for label, (source, bindings) in FORMULAS.items():
        program = compile_expr(parse(source), source)
        values = array("d", [bindings[name] for name in program.var_names])
        times = [bench(fn, program, values, opts.iterations) for _, fn in impls]
        cols = " ".join(f"{t * 1e9:>14.0f}" for t in times)
        speedup = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        print(f"{label:<22} {cols}  {speedup}")


if __name__ == "__main__":
    main()
