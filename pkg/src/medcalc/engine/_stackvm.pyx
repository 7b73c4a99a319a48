# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stack machine for formula programs.

Semantics (opcode values, error classification, operation order) mirror
_stackvm_py.py exactly; keep both in sync with medcalc.engine.program.
"""

from libc.math cimport (
    ceil as c_ceil,
    copysign as c_copysign,
    exp as c_exp,
    fabs as c_fabs,
    floor as c_floor,
    fmod as c_fmod,
    isfinite,
    log as c_log,
    log2 as c_log2,
    log10 as c_log10,
    pow as c_pow,
    sqrt as c_sqrt,
)

COMPILED = True


def run_program(const long long[::1] ops, const long long[::1] args,
                const double[::1] consts, const double[::1] variables,
                double[::1] stack):
    cdef Py_ssize_t ip = 0
    cdef Py_ssize_t n = ops.shape[0]
    cdef Py_ssize_t sp = 0
    cdef long long op, arg
    cdef double a, b, r, nd, scale
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
                r = c_fmod(a, b)
            else:  # POW
                if a == 0.0 and b < 0.0:
                    return (1, 0.0, ip)
                if a < 0.0 and b != c_floor(b):
                    return (2, 0.0, ip)
                r = c_pow(a, b)
            if not isfinite(r):
                return (3, 0.0, ip)
            stack[sp - 1] = r
        elif op <= 16:  # unary functions
            a = stack[sp - 1]
            if op == 9:
                if a < 0.0:
                    return (2, 0.0, ip)
                r = c_sqrt(a)
            elif op == 10:
                r = c_exp(a)
            elif op == 11:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = c_log(a)
            elif op == 12:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = c_log10(a)
            elif op == 13:
                if a <= 0.0:
                    return (2, 0.0, ip)
                r = c_log2(a)
            elif op == 14:
                r = c_fabs(a)
            elif op == 15:
                r = c_floor(a)
            else:
                r = c_ceil(a)
            if not isfinite(r):
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
            if nd != c_floor(nd) or nd < 0.0 or nd > 18.0:
                return (2, 0.0, ip)
            scale = c_pow(10.0, nd)
            r = c_floor(c_fabs(a) * scale + 0.5) / scale
            r = c_copysign(r, a)
            if not isfinite(r):
                return (3, 0.0, ip)
            stack[sp - 1] = r
        elif op <= 25:  # comparisons
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            if op == 20:
                r = 1.0 if a < b else 0.0
            elif op == 21:
                r = 1.0 if a <= b else 0.0
            elif op == 22:
                r = 1.0 if a > b else 0.0
            elif op == 23:
                r = 1.0 if a >= b else 0.0
            elif op == 24:
                r = 1.0 if a == b else 0.0
            else:
                r = 1.0 if a != b else 0.0
            stack[sp - 1] = r
        elif op == 26:  # JZ
            sp -= 1
            if stack[sp] == 0.0:
                ip = arg
                continue
        elif op == 27:  # JMP
            ip = arg
            continue
        ip += 1
    a = stack[0]
    if not isfinite(a):
        return (3, 0.0, n - 1)
    return (0, a, 0)
