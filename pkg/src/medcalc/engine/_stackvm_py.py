"""Pure-Python stack machine; bit-compatible fallback for _stackvm.pyx.

Opcode values mirror medcalc.engine.program; both backends must classify
errors identically and produce identical doubles (same libm calls, same
operation order), which tests/test_eval.py checks directly.
"""

from __future__ import annotations

import math

COMPILED = False


def run_program(ops, args, consts, variables, stack):
    ip = 0
    n = len(ops)
    sp = 0
    while ip < n:
        op = ops[ip]
        arg = args[ip]
        if op == 0:  # CONST
            stack[sp] = consts[arg]
            sp += 1
        elif op == 1:  # VAR
            stack[sp] = variables[arg]
            sp += 1
        elif op == 2:  # NEG
            stack[sp - 1] = -stack[sp - 1]
        elif op <= 8:  # binary arithmetic
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            if op == 3:
                r = a + b
            elif op == 4:
                r = a - b
            elif op == 5:
                r = a * b
            elif op == 6:
                if b == 0.0:
                    return (1, 0.0, ip)
                r = a / b
            elif op == 7:
                if b == 0.0:
                    return (1, 0.0, ip)
                r = math.fmod(a, b)
            else:  # POW
                if a == 0.0 and b < 0.0:
                    return (1, 0.0, ip)
                if a < 0.0 and b != math.floor(b):
                    return (2, 0.0, ip)
                try:
                    r = math.pow(a, b)
                except OverflowError:
                    return (3, 0.0, ip)
                except ValueError:
                    return (2, 0.0, ip)
            if not math.isfinite(r):
                return (3, 0.0, ip)
            stack[sp - 1] = r
        elif op <= 16:  # unary functions
            a = stack[sp - 1]
            if op == 9:
                if a < 0.0:
                    return (2, 0.0, ip)
                r = math.sqrt(a)
            elif op == 10:
                try:
                    r = math.exp(a)
                except OverflowError:
                    return (3, 0.0, ip)
            elif op == 11:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = math.log(a)
            elif op == 12:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = math.log10(a)
            elif op == 13:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = math.log2(a)
            elif op == 14:
                r = math.fabs(a)
            elif op == 15:
                r = math.floor(a)
            else:
                r = math.ceil(a)
            if not math.isfinite(r):
                return (3, 0.0, ip)
            stack[sp - 1] = r
        elif op == 17:  # MIN
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            stack[sp - 1] = b if b < a else a
        elif op == 18:  # MAX
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            stack[sp - 1] = b if b > a else a
        elif op == 19:  # ROUND half away from zero at n decimals
            sp -= 1
            nd = stack[sp]
            a = stack[sp - 1]
            if nd != math.floor(nd) or nd < 0.0 or nd > 18.0:
                return (2, 0.0, ip)
            scale = 10.0 ** int(nd)
            r = math.floor(math.fabs(a) * scale + 0.5) / scale
            r = math.copysign(r, a)
            if not math.isfinite(r):
                return (3, 0.0, ip)
            stack[sp - 1] = r
        elif op <= 25:  # comparisons
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            if op == 20:
                t = a < b
            elif op == 21:
                t = a <= b
            elif op == 22:
                t = a > b
            elif op == 23:
                t = a >= b
            elif op == 24:
                t = a == b
            else:
                t = a != b
            stack[sp - 1] = 1.0 if t else 0.0
        elif op == 26:  # JZ
            sp -= 1
            if stack[sp] == 0.0:
                ip = arg
                continue
        elif op == 27:  # JMP
            ip = arg
            continue
        ip += 1
    value = stack[0]
    if not math.isfinite(value):
        return (3, 0.0, n - 1)
    return (0, value, 0)
