"""Command-line surface, workspace persistence, and report rendering.

Subcommands front the library operations one-to-one:

  group-build   construct a group from a spec, store it, print a summary
  filtration    term orders per algorithm (recursive/lazard/degree/all)
  verify        full theorem harness for one group and rank
  separate      constructive separating representation for one element
  pairing       layer pairing matrix and verdicts

Every command also writes its result as JSON under a workspace directory
(groups/, systems/, reports/ with content-addressed filenames).  Exit
codes: 0 established/ok, 1 falsified (a hard invariant broke), 2
inconclusive outcome present, 3 parse/usage error, 4 cap or budget
violation, 5 unknown workspace id.
"""

import argparse
import hashlib
import json
import re
import sys
from pathlib import Path

import numpy as np

from .fplinalg import CapExceeded
from .groups import FiniteGroup, cyclic_group
from .magnus import build_magnus_group
from .massey import enumerate_defining_systems
from .multsys import MultSystem, catalog, group_from_system
from .pairing import PairingContext, harvest_standard_witnesses
from .verifier import (
    DEFAULT_BUDGET,
    SeparationEngine,
    generating_set,
    run_theorem_harness,
)

EXIT_ESTABLISHED = 0
EXIT_FALSIFIED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
EXIT_CAP = 4
EXIT_UNKNOWN_ID = 5

MAX_GROUP_ORDER = 1 << 16


class UsageError(ValueError):
    """Bad specs, bad words, bad parameters: exit code 3."""


class UnknownIdError(KeyError):
    """Workspace id does not resolve: exit code 5."""

    def __str__(self):  # KeyError quotes its payload by default
        return str(self.args[0]) if self.args else ""


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# group specs


def canonical_group_spec(spec: dict) -> dict:
    """Validate a group-spec dict and return its canonical form."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise UsageError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "magnus":
        try:
            p, d, m = int(spec["p"]), int(spec["d"]), int(spec["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"magnus spec needs integer p, d, m: {exc}")
        if d < 1 or m < 2:
            raise UsageError("magnus spec needs d >= 1 and m >= 2")
        if sum(d**k for k in range(1, m)) > 24:
            raise CapExceeded(
                "truncated algebra basis too large for desk scale"
            )
        return {"kind": "magnus", "p": p, "d": d, "m": m}
    if kind == "cyclic":
        try:
            p, order = int(spec["p"]), int(spec["order"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"cyclic spec needs integer p and order: {exc}")
        if order > MAX_GROUP_ORDER:
            raise CapExceeded(f"order {order} exceeds cap {MAX_GROUP_ORDER}")
        return {"kind": "cyclic", "p": p, "order": order}
    if kind == "matrix-unipotent":
        try:
            p, size = int(spec["p"]), int(spec["size"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(
                f"matrix-unipotent spec needs integer p and size: {exc}"
            )
        if size < 2:
            raise UsageError("matrix size must be at least 2")
        if p ** (size * (size - 1) // 2) > 4096:
            raise CapExceeded(
                "full unipotent group exceeds the 4096-element table cap"
            )
        out = {"kind": "matrix-unipotent", "p": p, "size": size}
        gens = spec.get("generators")
        if gens is not None:
            out["generators"] = [
                [[int(x) % p for x in row] for row in mat] for mat in gens
            ]
            for mat in out["generators"]:
                if len(mat) != size or any(len(row) != size for row in mat):
                    raise UsageError("generator matrices must be size x size")
                for i in range(size):
                    for j in range(size):
                        want = 1 if i == j else None
                        if j < i and mat[i][j] != 0:
                            raise UsageError(
                                "generator matrices must be upper unitriangular"
                            )
                        if want is not None and mat[i][j] != want:
                            raise UsageError(
                                "generator matrices must be upper unitriangular"
                            )
        return out
    raise UsageError(f"unknown group kind {kind!r}")


def _matrix_to_element(group: FiniteGroup, mat: list) -> int:
    """Element id of an upper-unitriangular matrix in a materialized U."""
    system: MultSystem = group.system
    size = system.n + 1
    coords = np.zeros(system.total_dim, dtype=np.int8)
    for (i, j), sl in ((pr, system.slice_of(pr)) for pr in system.pairs):
        coords[sl] = mat[i - 1][j - 1] % system.p
    hits = np.nonzero((group.uelements == coords).all(axis=1))[0]
    if hits.size != 1:
        raise UsageError("matrix is not an element of the unipotent group")
    return int(hits[0])


def build_group_from_spec(spec: dict) -> FiniteGroup:
    """Construct the group a canonical spec describes (deterministic)."""
    spec = canonical_group_spec(spec)
    if spec["kind"] == "magnus":
        group = build_magnus_group(spec["p"], spec["d"], spec["m"])
    elif spec["kind"] == "cyclic":
        group = cyclic_group(spec["p"], spec["order"])
    else:
        full = group_from_system(MultSystem.standard(spec["p"], spec["size"] - 1))
        if "generators" in spec:
            ids = [_matrix_to_element(full, m) for m in spec["generators"]]
            sub = full.closure(ids)
            group, embed = full.subgroup_group(sub)
            back = {int(g): i for i, g in enumerate(embed)}
            group.generators = [back[g] for g in ids if back[g] != 0]
        else:
            group = full
        if not group.generators:
            group.generators = generating_set(group)
    if group.order > MAX_GROUP_ORDER:
        raise CapExceeded(
            f"group order {group.order} exceeds cap {MAX_GROUP_ORDER}"
        )
    return group


# ---------------------------------------------------------------------------
# element words: x1..xd, products, powers, commutators


_TOKEN = re.compile(r"\s*(x\d+|\d+|\*|\^|\[|\]|\(|\)|,|-)")


def _tokenize_word(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"cannot tokenize element word at: {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _WordReader:
    """Recursive-descent evaluator for generator words.

    word   := factor { ("*")? factor }
    factor := atom [ "^" [-] digits ]
    atom   := x<k> | "[" word "," word "]" | "(" word ")"
    """

    def __init__(self, group: FiniteGroup, tokens: list[str]):
        self.group = group
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise UsageError(
                f"expected {expected or 'a token'}, found {tok!r} in element word"
            )
        self.pos += 1
        return tok

    def word(self) -> int:
        value = self.factor()
        while self.peek() not in (None, ",", "]", ")"):
            if self.peek() == "*":
                self.take()
            value = self.group.mul(value, self.factor())
        return value

    def factor(self) -> int:
        value = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            digits = self.take()
            if not digits.isdigit():
                raise UsageError(f"exponent must be an integer, got {digits!r}")
            k = sign * int(digits)
            if k < 0:
                value = self.group.inverse(self.group.power(value, -k))
            else:
                value = self.group.power(value, k)
        return value

    def atom(self) -> int:
        tok = self.take()
        if tok.startswith("x"):
            idx = int(tok[1:])
            gens = self.group.generators or generating_set(self.group)
            if not 1 <= idx <= len(gens):
                raise UsageError(
                    f"generator {tok} out of range; group has {len(gens)}"
                )
            return int(gens[idx - 1])
        if tok == "[":
            a = self.word()
            self.take(",")
            b = self.word()
            self.take("]")
            return self.group.comm(a, b)
        if tok == "(":
            value = self.word()
            self.take(")")
            return value
        raise UsageError(f"unexpected token {tok!r} in element word")


def parse_element_word(group: FiniteGroup, text: str) -> int:
    """Element id of a word over x1..xd with ^, *, and [a,b] commutators."""
    tokens = _tokenize_word(text)
    if not tokens:
        raise UsageError("empty element word")
    reader = _WordReader(group, tokens)
    value = reader.word()
    if reader.peek() is not None:
        raise UsageError(f"trailing tokens in element word: {reader.tokens[reader.pos:]}")
    return value


# ---------------------------------------------------------------------------
# workspace


def _canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _strip_timings(doc):
    if isinstance(doc, dict):
        return {k: _strip_timings(v) for k, v in doc.items() if k != "timings"}
    if isinstance(doc, list):
        return [_strip_timings(v) for v in doc]
    return doc


class Workspace:
    """groups/, systems/, reports/ with content-addressed filenames."""

    def __init__(self, root):
        self.root = Path(root)
        for sub in ("groups", "systems", "reports"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- groups -------------------------------------------------------------

    def store_group(self, spec: dict, group: FiniteGroup) -> dict:
        doc = {
            "schema_version": 1,
            "spec": canonical_group_spec(spec),
            "digest": group._digest,
            "order": group.order,
            "p": group.p,
            "generator_count": len(group.generators or generating_set(group)),
            "filtration_orders": group.zassenhaus_recursive().orders(),
        }
        path = self.root / "groups" / f"{group._digest}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return doc

    def load_group(self, gid: str) -> tuple[dict, FiniteGroup]:
        matches = sorted(
            p for p in (self.root / "groups").glob("*.json")
            if p.stem.startswith(gid)
        )
        if not matches:
            raise UnknownIdError(f"no stored group matches id {gid!r}")
        if len(matches) > 1:
            raise UnknownIdError(
                f"ambiguous group id {gid!r}: {[p.stem[:12] for p in matches]}"
            )
        doc = json.loads(matches[0].read_text())
        group = build_group_from_spec(doc["spec"])
        if group._digest != doc["digest"]:
            raise AssertionError(
                "stored group digest does not match its rebuilt group"
            )
        return doc, group

    # -- systems ------------------------------------------------------------

    def store_system(self, system: MultSystem) -> Path:
        path = self.root / "systems" / f"{system.digest}.json"
        if not path.exists():
            path.write_text(
                json.dumps(system.to_json(), indent=2, sort_keys=True) + "\n"
            )
        return path

    # -- reports ------------------------------------------------------------

    def store_report(self, kind: str, request: dict, result, keyed: str | None = None) -> Path:
        doc = {"schema_version": 1, "kind": kind, "request": request, "result": result}
        if keyed is None:
            digest = hashlib.sha256(
                _canonical_json(_strip_timings(doc)).encode()
            ).hexdigest()[:16]
            name = f"{kind}-{digest}.json"
        else:
            name = f"{kind}-{keyed}.json"
        path = self.root / "reports" / name
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return path

    def load_report(self, name: str):
        path = self.root / "reports" / name
        if not path.exists():
            return None
        return json.loads(path.read_text())


# ---------------------------------------------------------------------------
# commands


def cmd_group_build(args, ws: Workspace) -> tuple[int, dict, list[str]]:
    if args.spec_file:
        try:
            spec = json.loads(Path(args.spec_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read spec file: {exc}")
    elif args.spec_json:
        try:
            spec = json.loads(args.spec_json)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad spec JSON: {exc}")
    else:
        if not args.kind:
            raise UsageError("need --kind (or --spec-json/--spec-file)")
        spec = {"kind": args.kind, "p": args.p}
        if args.kind == "magnus":
            spec.update({"d": args.gens, "m": args.trunc})
        elif args.kind == "cyclic":
            spec.update({"order": args.order})
        elif args.kind == "matrix-unipotent":
            spec.update({"size": args.size})
            if args.generators:
                try:
                    spec["generators"] = json.loads(args.generators)
                except json.JSONDecodeError as exc:
                    raise UsageError(f"bad generator matrices JSON: {exc}")
        for key, value in list(spec.items()):
            if value is None:
                raise UsageError(f"missing required parameter --{key}")
    group = build_group_from_spec(spec)
    doc = ws.store_group(spec, group)
    lines = [
        f"group {doc['digest'][:16]}",
        f"kind: {doc['spec']['kind']}",
        f"order: {doc['order']}",
        f"p: {doc['p']}",
        f"generators: {doc['generator_count']}",
        f"filtration orders: {doc['filtration_orders']}",
        f"stored: groups/{doc['digest']}.json",
    ]
    return EXIT_ESTABLISHED, doc, lines


def _filtration_result(group: FiniteGroup, algorithm: str) -> dict:
    routes = {}
    if algorithm in ("recursive", "all"):
        routes["recursive"] = group.zassenhaus_recursive()
    if algorithm in ("lazard", "all"):
        routes["lazard"] = group.zassenhaus_lazard()
    if algorithm in ("degree", "all"):
        if group.degrees is None:
            if algorithm == "degree":
                raise UsageError(
                    "degree filtration needs a graded group "
                    "(truncated-series or unipotent construction)"
                )
        else:
            routes["degree"] = group.degree_filtration()
    result = {
        "orders": {name: filt.orders() for name, filt in routes.items()},
        "terms": {
            name: [list(t) for t in filt.terms] for name, filt in routes.items()
        },
    }
    names = sorted(routes)
    agree = all(routes[a] == routes[b] for a in names for b in names)
    result["agree"] = agree
    if algorithm == "all":
        if not agree:
            result["verdict"] = "disagreement"
        elif len(routes) == 3:
            result["verdict"] = "3-way agree"
        else:
            result["verdict"] = "2-way agree (degree route unavailable)"
    else:
        result["verdict"] = f"{algorithm} computed"
    return result


def cmd_filtration(args, ws: Workspace) -> tuple[int, dict, list[str]]:
    doc, group = ws.load_group(args.group_id)
    result = _filtration_result(group, args.algorithm)
    key = f"{doc['digest'][:16]}-{args.algorithm}"
    cached = ws.load_report(f"filtration-{key}.json")
    if cached is not None and cached["result"] != result:
        raise AssertionError("cached filtration disagrees with recomputation")
    request = {"group": doc["digest"], "algorithm": args.algorithm}
    path = ws.store_report("filtration", request, result, keyed=key)
    some = result["orders"][sorted(result["orders"])[0]]
    lines = [
        f"group: {doc['digest'][:16]} (order {doc['order']})",
        f"orders: {some}",
        f"verdict: {result['verdict']}",
        f"report: reports/{path.name}",
    ]
    if result["verdict"] == "disagreement":
        return EXIT_FALSIFIED, result, lines
    return EXIT_ESTABLISHED, result, lines


def _store_catalog_systems(ws: Workspace, report: dict, p: int, max_dim: int):
    wanted = set()
    for entry in report.get("kernels", {}).values():
        for sysdoc in entry.get("systems", []):
            wanted.add(sysdoc["digest"])
    if not wanted:
        return
    for k in range(1, report["n"] + 1):
        for system in catalog(p, k, max_dim):
            if system.digest in wanted:
                ws.store_system(system)
                wanted.discard(system.digest)
            if not wanted:
                return


def cmd_verify(args, ws: Workspace) -> tuple[int, dict, list[str]]:
    doc, group = ws.load_group(args.group_id)
    report = run_theorem_harness(
        group,
        args.rank_n,
        max_dim=args.catalog_dim,
        budget=args.budget,
        group_meta=doc["spec"],
    )
    report["jobs"] = args.jobs  # engine is vectorized single-process
    request = {
        "group": doc["digest"],
        "n": args.rank_n,
        "catalog_dim": args.catalog_dim,
        "budget": args.budget,
    }
    path = ws.store_report("verify", request, report)
    _store_catalog_systems(ws, report, group.p, args.catalog_dim)
    kernel_orders = {
        k: len(v["intersection"]) for k, v in report["kernels"].items()
    }
    lines = [
        f"group: {doc['digest'][:16]} (order {doc['order']})",
        f"n: {args.rank_n}  catalog dimension: {args.catalog_dim}",
        f"filtration: {report['filtration']['orders']}",
        f"hypothesis: {report['hypothesis']['status']}",
        f"kernel intersections (order per rank): {kernel_orders}",
        f"kernel side: {report['kernel_side']}",
        f"pairing side: {report['pairing_side']}",
        "separation: "
        f"{report['separation']['separated']}/{report['separation']['elements_outside']}"
        f" elements outside term {args.rank_n + 1} separated",
        f"standard system sufficed: "
        f"{all(v['standard_sufficed'] for v in report['kernels'].values())}",
        f"verdict: {report['verdict']}",
        f"report: reports/{path.name}",
    ]
    code = EXIT_ESTABLISHED if report["verdict"] == "established" else EXIT_INCONCLUSIVE
    return code, report, lines


def cmd_separate(args, ws: Workspace) -> tuple[int, dict, list[str]]:
    doc, group = ws.load_group(args.group_id)
    sigma = parse_element_word(group, args.word)
    engine = SeparationEngine(
        group, args.rank_n, max_dim=args.catalog_dim, budget=args.budget
    )
    outcome = engine.separate(sigma)
    result = {
        "element_word": args.word,
        "element_id": sigma,
        "status": outcome.status,
        "detail": outcome.detail,
    }
    if outcome.representation is not None:
        rep = outcome.representation
        result["representation"] = rep.to_json()
        result["image_of_element"] = rep.matrix[sigma].astype(int).tolist()
        ws.store_system(rep.system)
    request = {
        "group": doc["digest"],
        "word": args.word,
        "n": args.rank_n,
        "catalog_dim": args.catalog_dim,
    }
    path = ws.store_report("separate", request, result)
    lines = [
        f"group: {doc['digest'][:16]} (order {doc['order']})",
        f"element: {args.word} (id {sigma})",
        f"status: {outcome.status}",
    ]
    if outcome.status == "separated":
        lines.append(f"route: {outcome.detail.get('route')}")
        lines.append(f"image coordinates: {result['image_of_element']}")
        code = EXIT_ESTABLISHED
    elif outcome.status == "in_kernel":
        lines.append(
            f"element lies in filtration term {args.rank_n + 1}; every rank-"
            f"{args.rank_n} representation kills it"
        )
        code = EXIT_ESTABLISHED
    else:
        lines.append(f"detail: {outcome.detail}")
        code = EXIT_INCONCLUSIVE
    lines.append(f"report: reports/{path.name}")
    return code, result, lines


def cmd_pairing(args, ws: Workspace) -> tuple[int, dict, list[str]]:
    doc, group = ws.load_group(args.group_id)
    filt = group.zassenhaus_recursive()
    if args.subgroup:
        elements = {
            parse_element_word(group, w) for w in args.subgroup.split(";") if w.strip()
        }
        layer = group.closure(elements)
        selector = {"kind": "custom", "words": args.subgroup}
    else:
        layer = filt.term(args.rank_n)
        selector = {"kind": "filtration-term", "n": args.rank_n}
    ctx = PairingContext(group, layer, args.rank_n)
    harvest_standard_witnesses(ctx)
    escalated = 0
    if ctx.left_verdict() != "established" and args.catalog_dim >= 1:
        for system in catalog(group.p, args.rank_n, args.catalog_dim, include_standard=False):
            escalated += 1
            for ds in enumerate_defining_systems(ctx.quot, system, max_count=1 << 12):
                ctx.insert_witness(ds)
            if ctx.left_verdict() == "established":
                break
    result = ctx.summary()
    result["five_term"] = ctx.five_term()
    result["inflation_kernel"] = ctx.inflation_kernel_consistency()
    result["layer_selector"] = selector
    result["escalated_systems"] = escalated
    request = {
        "group": doc["digest"],
        "n": args.rank_n,
        "selector": selector,
        "catalog_dim": args.catalog_dim,
    }
    path = ws.store_report("pairing", request, result)
    lines = [
        f"group: {doc['digest'][:16]} (order {doc['order']})",
        f"layer order: {result['layer_order']}  rank: {result['layer_rank']}",
        f"witnesses: {result['witnesses_seen']} seen, "
        f"{result['witnesses_dying']} dying on the quotient",
        "pairing matrix (layer basis x witness basis):",
    ]
    lines += [f"  {row}" for row in result["matrix"]]
    lines += [
        f"left verdict: {result['left']}",
        f"right verdict: {result['right']}",
        f"report: reports/{path.name}",
    ]
    established = (
        result["left"] == "established" and result["right"] == "established"
    )
    code = EXIT_ESTABLISHED if established else EXIT_INCONCLUSIVE
    return code, result, lines


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--workspace", default="workspace", help="artifact directory (default: ./workspace)"
    )
    common.add_argument(
        "--format", choices=("json", "text"), default="text", dest="fmt",
        help="stdout rendering (artifacts are always JSON)",
    )
    common.add_argument(
        "--jobs", type=int, default=1,
        help="worker cap (the engine is vectorized; kept for interface stability)",
    )

    parser = _Parser(prog="zassenhaus", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group-build", parents=[common], help="construct and store a group")
    g.add_argument("--kind", choices=("magnus", "matrix-unipotent", "cyclic"))
    g.add_argument("--p", type=int, help="the prime")
    g.add_argument("--gens", type=int, help="magnus: number of free generators d")
    g.add_argument("--trunc", type=int, help="magnus: truncation degree m")
    g.add_argument("--order", type=int, help="cyclic: group order (p-power)")
    g.add_argument("--size", type=int, help="matrix-unipotent: matrix size")
    g.add_argument("--generators", help="matrix-unipotent: JSON generator matrices")
    g.add_argument("--spec-json", help="inline group-spec JSON")
    g.add_argument("--spec-file", help="path to group-spec JSON")

    f = sub.add_parser("filtration", parents=[common], help="filtration term orders")
    f.add_argument("group_id", help="stored group digest (prefix ok)")
    f.add_argument(
        "--algorithm", choices=("recursive", "lazard", "degree", "all"), default="all"
    )

    v = sub.add_parser("verify", parents=[common], help="run the theorem harness")
    v.add_argument("group_id")
    v.add_argument("--rank-n", type=int, required=True, help="rank n of the target systems")
    v.add_argument("--catalog-dim", type=int, default=1, help="catalog dimension bound D")
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    s = sub.add_parser("separate", parents=[common], help="separate one element")
    s.add_argument("group_id")
    s.add_argument("word", help="element word over x1..xd, e.g. '[x1,x2]*x1^2'")
    s.add_argument("--rank-n", type=int, required=True)
    s.add_argument("--catalog-dim", type=int, default=1)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("pairing", parents=[common], help="layer pairing matrix")
    p.add_argument("group_id")
    p.add_argument("--rank-n", type=int, required=True)
    p.add_argument(
        "--subgroup",
        help="custom layer: ';'-separated element words (default: filtration term n)",
    )
    p.add_argument("--catalog-dim", type=int, default=1)

    return parser


_COMMANDS = {
    "group-build": cmd_group_build,
    "filtration": cmd_filtration,
    "verify": cmd_verify,
    "separate": cmd_separate,
    "pairing": cmd_pairing,
}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        ws = Workspace(args.workspace)
        code, payload, lines = _COMMANDS[args.command](args, ws)
    except UnknownIdError as exc:
        print(f"unknown id: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_ID
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:  # UsageError and library precondition failures
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    if args.fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=int))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
