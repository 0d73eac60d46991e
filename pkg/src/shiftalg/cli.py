"""Command-line front end: shifts from config files or fixtures, expressions, suites and exports."""
import functools
import json
import sys

import click
import jsonschema
import yaml

from . import algebra, bridges, conjugacy, relations, sets, stone
from .config import FIXTURES, build_shift, fixture, load_config
from .errors import ParseError, UnknownLetter, WorkbenchError
from .otw import parse_point
from .rings import ring_from_name
from .words import fmt_word


class Session:
    def __init__(self, config, fixture_name, fmt, ring):
        self.cfg = load_config(config) if config else {}
        self.fixture_name = fixture_name
        self.fmt = fmt
        self.ring_name = ring or self.cfg.get("ring", "ZZ")
        self._shift = None

    @property
    def shift(self):
        if self._shift is None:
            if "subshift" in self.cfg:
                self._shift = build_shift(self.cfg["subshift"])
            elif self.fixture_name:
                self._shift = fixture(self.fixture_name)
            else:
                raise click.UsageError("give --config FILE or --fixture NAME")
        return self._shift

    @property
    def ring(self):
        try:
            return ring_from_name(self.ring_name)
        except ValueError as e:
            raise click.UsageError(str(e))

    def default(self, key, value, fallback):
        if value is not None:
            return value
        return self.cfg.get(key, fallback)


def _guard(fn):
    """Map library errors to exit codes: 2 for input problems, 1 for failed computations."""
    @functools.wraps(fn)
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except (ParseError, UnknownLetter) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(2)
        except jsonschema.ValidationError as e:
            click.echo(f"config error: {e.message} at {'/'.join(map(str, e.absolute_path)) or 'top level'}", err=True)
            sys.exit(2)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            click.echo(f"config error: {e}", err=True)
            sys.exit(2)
        except WorkbenchError as e:
            click.echo(f"{type(e).__name__}: {e}", err=True)
            sys.exit(1)
    return wrapper


def _emit(sess, data, table=None, dot=None):
    if sess.fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    elif sess.fmt == "dot":
        if dot is None:
            raise click.UsageError("this command has no DOT output")
        click.echo(dot)
    else:
        for line in table if table is not None else _table(data):
            click.echo(line)


def _table(data, indent=""):
    out = []
    for k in sorted(data):
        v = data[k]
        if isinstance(v, dict):
            out.append(f"{indent}{k}:")
            out.extend(_table(v, indent + "  "))
        elif isinstance(v, list):
            out.append(f"{indent}{k}: " + ", ".join(map(str, v)))
        else:
            out.append(f"{indent}{k}: {v}")
    return out


def _report_table(title, header, rows):
    out = [title, header]
    for r in rows:
        line = f"  {r['status']:<5} {r['relation']}  ({r['checked']} checked"
        if r.get("skipped"):
            line += f", {r['skipped']} skipped"
        line += ")"
        if r.get("witness"):
            line += f"  witness: {r['witness']}"
        out.append(line)
    return out


@click.group()
@click.option("--config", "config", type=click.Path(exists=True, dir_okay=False), help="YAML or JSON workbench config.")
@click.option("--fixture", "fixture_name", type=click.Choice(sorted(FIXTURES)), help="Built-in subshift.")
@click.option("--format", "fmt", type=click.Choice(["table", "json", "dot"]), default="table")
@click.option("--ring", default=None, help="ZZ, QQ or GF(p).")
@click.pass_context
@_guard
def main(ctx, config, fixture_name, fmt, ring):
    """Exact computations in subshift algebras and their Stone duals."""
    ctx.obj = Session(config, fixture_name, fmt, ring)


# ------------------------------------------------------------------ lang

@main.command("lang")
@click.option("--max-len", type=int, default=None)
@click.option("--budget", type=int, default=None, help="Word budget per length for infinite alphabets.")
@click.pass_obj
@_guard
def cmd_lang(sess, max_len, budget):
    """Language words up to a length."""
    sh = sess.shift
    n = sess.default("max_len", max_len, 3)
    b = sess.default("budget", budget, 10)
    words = {}
    truncated = False
    for k in range(n + 1):
        ws, tr = sh.enumerate_language(k, b)
        truncated = truncated or tr
        words[str(k)] = [fmt_word(w) for w in ws]
    data = {"shift": sh.describe(), "max_len": n, "budget": b, "truncated": truncated,
            "unital_without_top": sets.is_unital(sh), "counts": {k: len(v) for k, v in words.items()},
            "words": words}
    table = [f"shift {sh.name}  max_len={n}  budget={b}" + ("  (truncated)" if truncated else ""),
             f"unital without top: {data['unital_without_top']}"]
    for k, v in words.items():
        table.append(f"  {k}: {len(v)}  " + " ".join(v))
    _emit(sess, data, table)


# ------------------------------------------------------------------ set

@main.group("set")
def cmd_set():
    """Set expressions over Z(w), F(w), C(a,b), X with | & \\ ~."""


@cmd_set.command("eval")
@click.argument("expr")
@click.option("--flavor", type=click.Choice(["U", "B"]), default="U")
@click.pass_obj
@_guard
def set_eval(sess, expr, flavor):
    sh = sess.shift
    A = sets.parse_set(sh, expr, flavor)
    data = {"shift": sh.name, "input": expr, "canonical": str(A), "empty": A.is_empty(), "in_B": sets.in_B(A),
            "regular": sets.is_regular(A)}
    _emit(sess, data)


@cmd_set.command("compare")
@click.argument("left")
@click.argument("right")
@click.pass_obj
@_guard
def set_compare(sess, left, right):
    sh = sess.shift
    A, B = sets.parse_set(sh, left), sets.parse_set(sh, right)
    data = {"shift": sh.name, "left": str(A), "right": str(B), "equal": A == B, "subset": A.issubset(B),
            "disjoint": A.isdisjoint(B)}
    _emit(sess, data)


# ------------------------------------------------------------------ alg

@main.group("alg")
def cmd_alg():
    """Algebra expressions in s(w), st(w), p(set) with + - * and scalars."""


@cmd_alg.command("eval")
@click.argument("expr")
@click.option("--flavor", type=click.Choice(["U", "B"]), default="U")
@click.pass_obj
@_guard
def alg_eval(sess, expr, flavor):
    sh = sess.shift
    x = algebra.parse_element(sh, expr, sess.ring, flavor)
    parts = {str(d): str(y) for d, y in algebra.degree_decompose(x).items()}
    data = {"shift": sh.name, "ring": sess.ring.name, "flavor": flavor, "input": expr,
            "normal_form": str(x), "degrees": parts}
    _emit(sess, data, [str(x)])


@cmd_alg.command("equal")
@click.argument("left")
@click.argument("right")
@click.option("--flavor", type=click.Choice(["U", "B"]), default="U")
@click.pass_obj
@_guard
def alg_equal(sess, left, right, flavor):
    sh = sess.shift
    x = algebra.parse_element(sh, left, sess.ring, flavor)
    y = algebra.parse_element(sh, right, sess.ring, flavor)
    eq = algebra.equals(x, y)
    _emit(sess, {"shift": sh.name, "left": str(x), "right": str(y), "equal": eq})
    if not eq:
        sys.exit(1)


# ------------------------------------------------------------------ stone

@main.group("stone")
def cmd_stone():
    """Atoms of the depth-k Boolean algebras and their groupoid."""


@cmd_stone.command("fiber")
@click.option("--point", required=True, help="inf(pre;per), fin(w) or zero.")
@click.option("--depth", type=int, default=None)
@click.pass_obj
@_guard
def stone_fiber(sess, point, depth):
    sh = sess.shift
    k = sess.default("depth", depth, 3)
    p = parse_point(sh, point)
    atoms = stone.cover_fiber(p, k)
    data = stone.fiber_json(p, k, atoms)
    table = [f"point {p}  depth={k}  count={len(atoms)}"]
    table += [f"  {r['atom']}  prefix {r['prefix']} ({r['status']})" for r in data["atoms"]]
    _emit(sess, data, table)


@cmd_stone.command("atoms")
@click.option("--depth", type=int, default=None)
@click.pass_obj
@_guard
def stone_atoms(sess, depth):
    sh = sess.shift
    k = sess.default("depth", depth, 2)
    data = stone.atoms_json(sh, k)
    table = [f"shift {sh.name}  depth={k}  count={data['count']}"]
    table += [f"  {r['atom']}  prefix {r['prefix']} ({r['status']})" for r in data["atoms"]]
    dot = stone.refinement_dot(sh, k) if sess.fmt == "dot" else None
    _emit(sess, data, table, dot)


@cmd_stone.command("groupoid")
@click.option("--depth", type=int, default=None)
@click.pass_obj
@_guard
def stone_groupoid(sess, depth):
    sh = sess.shift
    k = sess.default("depth", depth, 2)
    if sess.fmt != "dot":
        raise click.UsageError("stone groupoid prints DOT only; pass --format dot")
    _emit(sess, {}, None, stone.groupoid_dot(sh, k))


# ------------------------------------------------------------------ relations

@main.command("relations")
@click.option("--max-len", type=int, default=None)
@click.option("--window", type=int, default=None, help="Letter window for infinite alphabets.")
@click.pass_obj
@_guard
def cmd_relations(sess, max_len, window):
    """Run the relation suite and report each relation."""
    sh = sess.shift
    L = sess.default("max_len", max_len, 3)
    w = sess.default("window", window, 5)
    rep = relations.relation_suite(sh, L, w, sess.ring)
    data = rep.as_dict()
    data.pop("seconds")
    data["window"] = w
    head = f"shift {sh.name}  max_len={L}  window={w}  letters={' '.join(data['letters'])}"
    table = _report_table(head, "all pass" if rep.passed else "FAILURES", data["relations"])
    _emit(sess, data, table)
    if not rep.passed:
        sys.exit(1)


# ------------------------------------------------------------------ lpa

@main.command("lpa")
@click.option("--budget", type=int, default=None, help="Vertex budget for rule-presented ultragraphs.")
@click.pass_obj
@_guard
def cmd_lpa(sess, budget):
    """Path-algebra relations realised in the subshift algebra."""
    sh = sess.shift
    b = sess.default("budget", budget, 6)
    g = sh if isinstance(sh, bridges.RuleShift) else getattr(sh, "graph", None)
    if g is None:
        raise click.UsageError(f"{sh.name} is not given by a graph or ultragraph")
    if sess.fmt == "dot":
        if isinstance(g, bridges.RuleShift):
            raise click.UsageError("DOT export needs a finite graph")
        _emit(sess, {}, None, g.to_dot())
        return
    if isinstance(g, bridges.Graph) and not isinstance(g, bridges.Ultragraph):
        rep = bridges.verify_lpa_relations(g, sess.ring)
        data = rep.as_dict()
        data["generators"] = bridges.lpa_generators(g, sess.ring).as_text()
        head = f"graph {g.name}"
    else:
        rep = bridges.verify_ultragraph_relations(g, b, sess.ring)
        data = rep.as_dict()
        data["vertex_budget"] = b
        head = f"ultragraph {sh.name}  vertex_budget={b}"
    data.pop("seconds")
    data.pop("max_len")
    _emit(sess, data, _report_table(head, "all pass" if rep.passed else "FAILURES", data["relations"]))
    if not rep.passed:
        sys.exit(1)


# ------------------------------------------------------------------ conj

@main.group("conj")
def cmd_conj():
    """Block codes and finite-depth conjugacy checks."""


def _code(sess, name):
    if name:
        return conjugacy.code_fixture(name)
    cfg = sess.cfg
    if "code" not in cfg or "target" not in cfg:
        raise click.UsageError("give --code NAME or a config with subshift, target and code")
    return conjugacy.code_from_config(cfg["code"], sess.shift, build_shift(cfg["target"]))


@cmd_conj.command("apply")
@click.argument("word")
@click.option("--code", "code_name", type=click.Choice(conjugacy.CODE_FIXTURES), default=None)
@click.pass_obj
@_guard
def conj_apply(sess, word, code_name):
    """Image of a word under a block code."""
    h, _ = _code(sess, code_name)
    out = conjugacy.apply_code(h, h.X1.parse_word(word))
    _emit(sess, {"input": word, "image": fmt_word(out)}, [fmt_word(out)])


@cmd_conj.command("verify")
@click.option("--code", "code_name", type=click.Choice(conjugacy.CODE_FIXTURES), default=None)
@click.option("--depth", type=int, default=None)
@click.option("--m-budget", type=int, default=None)
@click.pass_obj
@_guard
def conj_verify(sess, code_name, depth, m_budget):
    """Check a code and its inverse against the conjugacy conditions up to a depth."""
    h, hi = _code(sess, code_name)
    if hi is None:
        raise click.UsageError("conjugacy checks need a declared inverse")
    k = sess.default("depth", depth, 4)
    mb = sess.default("budget", m_budget, 2)
    rep = conjugacy.verify_theone(h, hi, k, mb)
    table = [f"{h.X1.name} -> {h.X2.name}  depth={k}  M_budget={mb}  "
             + ("all checks pass at this depth" if rep["passed"] else "FAILURES")]
    for name, c in sorted(rep["checks"].items()):
        line = f"  ({name}) {c['status']:<7} {c.get('note', '')}"
        if "witness" in c:
            line += f"  witness: {c['witness']}"
        table.append(line)
    _emit(sess, rep, table)
    if not rep["passed"]:
        sys.exit(1)


if __name__ == "__main__":
    main()
