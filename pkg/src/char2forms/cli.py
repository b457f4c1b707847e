"""Command-line front end: parse a form description, run analyses, print reports.

Input documents are small line-oriented files:

    # comment lines and blank lines are ignored
    field: ratfunc(gf2,t)
    gram:
    t 0 0 0
    0 1 0 0
    0 0 1 0
    0 0 0 1

``decompose`` reads a 2x2 ``matrix:`` block instead (entries may use ``j``
when ``ring: k(<delta>)`` selects the quadratic algebra).  Reports are plain
text with a stable section order; ``--machine`` switches to flat key=value
lines.  Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import oracle
from .exterior import alt_matrix, hodge, hodge_identities, pq
from .fields import Field, FieldError, ParseError, parse_field
from .forms import (BilinearForm, FormError, orthogonalize, quadratic_data,
                    discriminant_class)
from .groups import (GroupError, NotUnimodular, classify, generate_closure,
                     sl2_decompose)
from .kalgebra import KAlgebra, KAlgebraError, build_module, normalize_split, wz_submodule
from .linalg import LinalgError, Matrix, Vector


class CliInputError(Exception):
    pass


@dataclass
class InputDocument:
    field: Field
    matrix: Matrix
    ring_spec: str
    k_delta: Optional[object]
    path: str


def parse_document(path: str, text: str) -> InputDocument:
    field: Optional[Field] = None
    ring_spec = "field"
    k_delta_text: Optional[str] = None
    rows: list[list[str]] = []
    row_lines: list[int] = []
    in_matrix = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not in_matrix:
            key, _, value = line.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if key == "field":
                try:
                    field = parse_field(value)
                except FieldError as exc:
                    raise CliInputError(f"{path}:{lineno}: {exc}") from None
            elif key == "ring":
                if value == "field":
                    ring_spec = "field"
                elif value.startswith("k(") and value.endswith(")"):
                    ring_spec = "k"
                    k_delta_text = value[2:-1]
                else:
                    raise CliInputError(f"{path}:{lineno}: bad ring spec {value!r}")
            elif key in ("gram", "matrix"):
                in_matrix = True
            else:
                raise CliInputError(f"{path}:{lineno}: unknown key {key!r}")
        else:
            rows.append(line.split())
            row_lines.append(lineno)
    if field is None:
        raise CliInputError(f"{path}: missing 'field:' line")
    if not rows:
        raise CliInputError(f"{path}: missing 'gram:'/'matrix:' block")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise CliInputError(f"{path}: ragged matrix rows")

    k_delta = None
    ring = field
    if ring_spec == "k":
        try:
            k_delta = field.parse(k_delta_text)
            ring = KAlgebra(field, k_delta)
        except (FieldError, KAlgebraError) as exc:
            raise CliInputError(f"{path}: bad K delta: {exc}") from None

    entries = []
    for line_no, row in zip(row_lines, rows):
        out_row = []
        for col, token in enumerate(row):
            try:
                out_row.append(ring.parse(token))
            except ParseError as exc:
                pos = exc.position if exc.position >= 0 else 0
                raise CliInputError(
                    f"{path}:{line_no}: entry {col + 1} ({token!r}): {exc} "
                    f"(column {pos + 1} of entry)") from None
            except FieldError as exc:
                raise CliInputError(f"{path}:{line_no}: entry {col + 1}: {exc}") from None
        entries.append(out_row)
    matrix = Matrix(ring, entries)
    return InputDocument(field=field, matrix=matrix, ring_spec=ring_spec,
                         k_delta=k_delta, path=path)


class Report:
    """Ordered report items; rendered as text sections or key=value lines."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []
        self.failures = 0

    def item(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{key}: {value}")

    def block(self, key: str, matrix) -> None:
        text_rows = str(matrix).split("\n")
        if self.machine:
            for i, row in enumerate(text_rows):
                self.lines.append(f"{key}.{i}={row}")
        else:
            self.lines.append(f"{key}:")
            self.lines.extend("  " + row for row in text_rows)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        if not passed:
            self.failures += 1
        suffix = "" if passed or not detail else f" ({detail})"
        if self.machine:
            key = name.replace(" ", "_").replace("=", "-eq-")
            self.lines.append(f"check.{key}={status.lower()}{suffix}")
        else:
            self.lines.append(f"check {name}: {status}{suffix}")

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _require_symmetric(doc: InputDocument) -> BilinearForm:
    if doc.ring_spec != "field":
        raise CliInputError(f"{doc.path}: this command needs a form over the field")
    try:
        return BilinearForm(doc.matrix)
    except FormError as exc:
        raise CliInputError(f"{doc.path}: {exc}") from None


def _volume(doc: InputDocument, text: Optional[str]):
    if text is None:
        return None
    try:
        return doc.field.parse(text)
    except FieldError as exc:
        raise CliInputError(f"bad --volume-scale: {exc}") from None


def cmd_analyze(doc: InputDocument, args, report: Report) -> int:
    form = _require_symmetric(doc)
    report.item("command", "analyze")
    report.item("field", doc.field.describe())
    report.item("dimension", form.dim)
    report.item("alternating", _yesno(form.is_alternating()))
    report.item("degenerate", _yesno(form.is_degenerate()))
    basis, diag = orthogonalize(form)
    report.block("orthogonal basis columns", Matrix.from_columns(doc.field, basis))
    report.item("diagonal", " ".join(str(d) for d in diag))
    if form.is_degenerate():
        report.item("note", "degenerate form: defect analysis skipped")
        return 0
    qd = quadratic_data(form)
    report.item("range dimension", qd.range_dimension)
    report.item("defect", qd.defect)
    if qd.kernel:
        report.block("kernel of q (rows)",
                     Matrix(doc.field, [list(v.entries) for v in qd.kernel]))
    else:
        report.item("kernel of q", "trivial")
    rep, is_sq = discriminant_class(form)
    report.item("discriminant", f"{rep} ({'square' if is_sq else 'non-square'})")
    if form.dim % 2 == 0:
        scale = _volume(doc, args.volume_scale)
        diag_form = BilinearForm(Matrix.diagonal(doc.field, diag))
        data = hodge(diag_form, scale)
        report.item("volume scale", data.volume_scale)
        report.item("delta", data.delta)
        module = build_module(data)
        report.item("K algebra",
                    "split (local ring with nilpotents)" if module.split
                    else "inseparable quadratic field extension (non-split)")
        label = " ".join("(" + ",".join(str(i) for i in s) + ")"
                         for s in module.basis_sets)
        report.block(f"g gram over K, basis {label}", module.g_gram)
    return 0


def cmd_classify(doc: InputDocument, args, report: Report) -> int:
    form = _require_symmetric(doc)
    report.item("command", "classify")
    report.item("field", doc.field.describe())
    rep = classify(form)
    report.item("defect", rep.defect)
    report.item("K split", _yesno(rep.k_split))
    report.item("case", rep.case)
    report.item("structure", rep.description)
    report.item("multipliers", rep.multipliers)
    report.block("normal gram", rep.normal_gram)
    report.item("scale", rep.scale)
    report.block("normalizing basis columns", rep.normalizer)
    isometries = [g for g in rep.generators if g.multiplier.is_one()]
    report.item("isometry generators", len(isometries))
    for g in rep.generators:
        if not g.multiplier.is_one():
            report.item("similitude multiplier", g.multiplier)
    sim = rep.case_data.get("similitude")
    if sim is not None:
        report.item("similitude multiplier", sim.multiplier)
    if doc.field.order is not None:
        q = doc.field.order
        predicted = rep.predicted_order(q)
        closure = generate_closure([g.matrix for g in isometries])
        report.item("predicted order", predicted)
        report.item("generated order", len(closure))
        result = oracle.enumerate_isometries(form, keep_elements=True)
        report.item(f"oracle order ({result.method})", result.order)
        report.check("oracle agrees with generated group",
                     oracle.closure_order_matches(result, closure))
        report.check("oracle agrees with predicted order", result.order == predicted)
    for note in rep.notes:
        report.item("note", note)
    return 1 if report.failures else 0


def cmd_verify(doc: InputDocument, args, report: Report) -> int:
    form = _require_symmetric(doc)
    report.item("command", "verify")
    report.item("field", doc.field.describe())
    if form.dim % 2:
        raise CliInputError(f"{doc.path}: verify needs an even-dimensional form")
    if form.is_degenerate():
        raise CliInputError(f"{doc.path}: verify needs a non-degenerate form")
    scale = _volume(doc, args.volume_scale)
    rng = random.Random(args.seed)

    data = hodge(form, scale)
    if args.corrupt_j:
        corrupted = data.j_matrix + Matrix.identity(doc.field, data.space.dim)
        data = dataclasses.replace(data, j_matrix=corrupted)
    report.item("volume scale", data.volume_scale)
    report.item("delta", data.delta)
    for name, ok, detail in hodge_identities(data):
        report.check(name, ok, detail)
    report.check("Pf symmetric", data.pf_gram.is_symmetric())
    report.check("Pf alternating (zero diagonal)",
                 all(data.pf_gram[i, i].is_zero() for i in range(data.space.dim)))
    report.check("Lh symmetric", data.lh_gram.is_symmetric())
    report.check("Lh non-degenerate", not data.lh_gram.det().is_zero())

    if form.dim == 4:
        _verify_pq(doc, data, rng, report)

    # module checks run over an orthogonal basis
    basis, diag = orthogonalize(form)
    diag_form = BilinearForm(Matrix.diagonal(doc.field, diag))
    module = build_module(hodge(diag_form, scale))
    sets = module.hodge.space.sets
    agree = True
    for s in sets:
        for t_set in sets:
            u = module.hodge.space.basis_vector(doc.field, s)
            v = module.hodge.space.basis_vector(doc.field, t_set)
            try:
                oracle.direct_g(u, v, module)
            except AssertionError:
                agree = False
    report.check("g two-formula agreement", agree)
    report.item("K split", _yesno(module.split))
    if module.split:
        module = normalize_split(module)
        z = module.z()
        report.check("z^2 = 0", (z * z).is_zero())
        try:
            wz_basis, rho = wz_submodule(module)
            report.check("g vanishes on Wz x Wz", True)
            report.check("rho_z bijective", not rho.det().is_zero())
            report.check("j fixes Wz pointwise",
                         all(module.hodge.j_matrix * v == v for v in wz_basis))
        except AssertionError as exc:
            report.check("split module structure", False, str(exc))

    failed = report.failures
    report.item("result", "all checks passed" if not failed
                else f"{failed} check(s) failed")
    return 1 if failed else 0


def _verify_pq(doc: InputDocument, data, rng, report: Report) -> None:
    field = doc.field
    dim = data.space.dim
    basis = [Vector.unit(field, dim, i) for i in range(dim)]
    polar_ok = all(
        pq(x + y) + pq(x) + pq(y) == _pf_scale1(data, x, y)
        for x in basis for y in basis)
    report.check("Pq polar form = Pf (scale 1)", polar_ok)
    if field.order is not None and field.order <= 16:
        s = oracle.brute_pq_scalar(field)
        report.check(f"Pq(X)^2 = s*det(altX), exhaustive, s = {s}", True)
    else:
        s = None
        ok = True
        for _ in range(50):
            x = Vector(field, [field.random_element(rng) for _ in range(6)])
            lhs = pq(x) ** 2
            rhs = alt_matrix(x).det()
            if rhs.is_zero():
                ok = ok and lhs.is_zero()
                continue
            ratio = lhs * rhs.inverse()
            if s is None:
                s = ratio
            ok = ok and (ratio == s)
        report.check(f"Pq(X)^2 = s*det(altX), sampled, s = {s}", ok)


def _pf_scale1(data, x, y):
    # the polar-form comparison is stated at volume scale 1
    scale_inv = data.volume_scale.inverse()
    total = data.field.zero()
    gy = data.pf_gram * y
    for a, b in zip(x, gy):
        total = total + a * b
    return total * scale_inv


def cmd_decompose(doc: InputDocument, args, report: Report) -> int:
    mat = doc.matrix
    report.item("command", "decompose")
    if doc.ring_spec == "k":
        report.item("ring", f"k({doc.k_delta}) over {doc.field.describe()}")
    else:
        report.item("ring", doc.field.describe())
    if mat.nrows != 2 or mat.ncols != 2:
        raise CliInputError(f"{doc.path}: decompose needs a 2x2 matrix")
    report.block("input", mat)
    try:
        word = sl2_decompose(mat)
    except NotUnimodular as exc:
        raise CliInputError(f"{doc.path}: {exc}") from None
    report.item("word", str(word))
    product = word.evaluate()
    report.block("product", product)
    report.check("word reproduces input", product == mat)
    return 1 if report.failures else 0


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="char2forms",
        description="exact analysis of non-alternating symmetric bilinear "
                    "forms in characteristic two")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", help="input document path")
    parser.add_argument("--volume-scale", default=None, metavar="ELT",
                        help="value of the volume identification (default 1)")
    parser.add_argument("--machine", action="store_true",
                        help="emit flat key=value output")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for sampled checks over infinite fields")
    parser.add_argument("--corrupt-j", action="store_true",
                        help="self-test hook: corrupt J before verifying")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        doc = parse_document(args.input, text)
        report = Report(machine=args.machine)
        code = COMMANDS[args.command](doc, args, report)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FieldError, FormError, LinalgError, KAlgebraError, GroupError,
            oracle.OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
