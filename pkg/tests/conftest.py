import random

import pytest

from shiftalg.algebra import monomial, zero
from shiftalg.sets import parse_set

import oracles

FINITE = ["full2", "golden", "even"]
ALL = ["full2", "golden", "even", "theorPropfail", "renewal"]


def eng_word(shift, s):
    return shift.parse_word(s) if s else ()


def eng_set(shift, ast):
    return parse_set(shift, oracles.ast_text(ast))


def eng_point(shift, p):
    return eng_word(shift, p[0]), eng_word(shift, p[1])


def set_pool(name, max_len=1):
    """Small set ASTs: X, Z(w), F(w), C(a,b) with short words."""
    ws = oracles.words_upto(name, max_len)
    out = [("X",)]
    out += [("Z", w) for w in ws if w]
    out += [("F", w) for w in ws if w]
    out += [("C", a, b) for a in ws for b in ws if a and b]
    return out


def random_set(rng, pool, depth=1):
    A = rng.choice(pool)
    for _ in range(rng.randint(0, depth)):
        A = (rng.choice(["|", "&", "\\"]), A, rng.choice(pool))
    return A


def random_monomials(rng, name, n_terms=4, max_word=2, coef=3):
    ws = oracles.words_upto(name, max_word)
    pool = set_pool(name)
    out = []
    for _ in range(rng.randint(1, n_terms)):
        c = 0
        while c == 0:
            c = rng.randint(-coef, coef)
        out.append((c, rng.choice(ws), random_set(rng, pool), rng.choice(ws)))
    return out


def rewrite_equal(rng, name, monos):
    """An expression equal to monos, obtained by a syntactic identity."""
    monos = list(monos)
    kind = rng.randrange(4)
    i = rng.randrange(len(monos))
    c, a, A, b = monos[i]
    if kind == 0:
        rng.shuffle(monos)
    elif kind == 1:
        c1 = rng.randint(-3, 3)
        monos[i:i + 1] = [(c1, a, A, b), (c - c1, a, A, b)]
    elif kind == 2:
        B = rng.choice(set_pool(name))
        monos[i:i + 1] = [(c, a, ("&", A, B), b), (c, a, ("\\", A, B), b)]
    else:
        monos[i:i + 1] = [(c, a, ("&", A, ("Z", x)), b) for x in oracles.LETTERS]
    return [m for m in monos if m[0] != 0]


def build(shift, monos):
    x = zero(shift)
    for c, a, A, b in monos:
        x = x + monomial(shift, eng_word(shift, a), eng_set(shift, A), eng_word(shift, b), c)
    return x


@pytest.fixture
def rng():
    return random.Random(20261019)


ACCEPTANCE = {}


def record_criterion(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
