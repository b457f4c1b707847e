"""Isometry and similitude groups of non-alternating forms in dimension 4.

The classification by defect:

  defect 3: O(V,h) ~= (SL2(F) semidirect F^2) x F, K split
  defect 2, K non-split: O(V,h) ~= SL2(F)
  defect 2, K split:     O(V,h) ~= (F^3, +)
  defect 1: O(V,h) ~= (F, +), K non-split
  defect 0: O(V,h) trivial (q anisotropic)

Each case comes with an explicit normal form, explicit generators, the
similitude families realizing the multiplier set, and the representation on
the K-module W = Lambda^2 V (and on Wz in the split cases).  ``classify``
normalizes an arbitrary non-degenerate non-alternating 4-dimensional form to
the matching normal form by constructive basis changes and transports the
generators back to the input coordinates.

All group elements are plain matrices with a multiplier; finite groups are
materialized by breadth-first closure of the generator set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ._smallfield import try_int_field
from .exterior import compound_matrix, hodge
from .fields import FieldElement, square_span_solve
from .forms import BilinearForm, DegenerateForm, FormError, orthogonalize, quadratic_data
from .kalgebra import (KAlgebra, KModule, NotSplit, build_module, k_is_square,
                       wz_submodule)
from .linalg import DimensionMismatch, Matrix, Vector


class GroupError(Exception):
    pass


class NotUnimodular(GroupError):
    pass


class NotSimilitude(GroupError):
    pass


class HypothesisViolated(GroupError):
    pass


class EnumerationTooLarge(GroupError):
    pass


# ---------------------------------------------------------------------------
# membership predicates

def is_isometry(form: BilinearForm, a: Matrix) -> bool:
    """A^T H A = H with A invertible."""
    if not a.is_square() or a.nrows != form.dim:
        raise DimensionMismatch("candidate has the wrong shape")
    if a.transpose() * form.gram * a != form.gram:
        return False
    return not a.det().is_zero()


def similitude_multiplier(form: BilinearForm, a: Matrix) -> Optional[FieldElement]:
    """r with A^T H A = r H and r != 0, if one exists."""
    if not a.is_square() or a.nrows != form.dim:
        raise DimensionMismatch("candidate has the wrong shape")
    m = a.transpose() * form.gram * a
    n = form.dim
    anchor = next(((i, j) for i in range(n) for j in range(n)
                   if not form.gram[i, j].is_zero()), None)
    if anchor is None:
        return None
    i, j = anchor
    if m[i, j].is_zero():
        return None
    r = m[i, j] * form.gram[i, j].inverse()
    if m != form.gram * r:
        return None
    return r


@dataclass(frozen=True)
class GroupElement:
    """A similitude candidate with its multiplier (1 for isometries)."""

    matrix: Matrix
    multiplier: FieldElement


# ---------------------------------------------------------------------------
# SL2 over a commutative local ring of characteristic 2

def l2(ring, x) -> Matrix:
    x = ring.coerce(x)
    return Matrix(ring, [[ring.one(), ring.zero()], [x, ring.one()]])


def u2(ring, x) -> Matrix:
    x = ring.coerce(x)
    return Matrix(ring, [[ring.one(), x], [ring.zero(), ring.one()]])


@dataclass(frozen=True)
class SL2Word:
    """A word in the elementary matrices L(x) and U(x)."""

    ring: object
    letters: tuple[tuple[str, object], ...]

    def evaluate(self) -> Matrix:
        out = Matrix.identity(self.ring, 2)
        for kind, x in self.letters:
            out = out * (l2(self.ring, x) if kind == "L" else u2(self.ring, x))
        return out

    def __str__(self):
        return " ".join(f"{kind}({x})" for kind, x in self.letters)


def sl2_decompose(a: Matrix) -> SL2Word:
    """Factor a determinant-1 matrix over a local char-2 ring into L/U letters.

    Over a local ring the entries a11 and a21 cannot both be non-units, which
    picks one of two explicit words of length at most four.
    """
    ring = a.ring
    if a.nrows != 2 or a.ncols != 2:
        raise DimensionMismatch("SL2 decomposition needs a 2x2 matrix")
    one = ring.one()
    det = a[0, 0] * a[1, 1] + a[0, 1] * a[1, 0]
    if det != one:
        raise NotUnimodular(f"determinant is {det}, not 1")
    aa, ab, ac, ad = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    if ring.is_unit(aa):
        inv = aa.inverse()
        word = SL2Word(ring, (("L", inv * (ac + one)), ("U", aa + one),
                              ("L", one), ("U", inv * (one + ab + aa))))
    elif ring.is_unit(ac):
        inv = ac.inverse()
        word = SL2Word(ring, (("U", inv * (aa + one)), ("L", ac),
                              ("U", inv * (ad + one))))
    else:
        raise GroupError("internal: both corner entries non-invertible with det 1")
    assert word.evaluate() == a
    return word


def hat_l(ring, x) -> Matrix:
    x = ring.coerce(x)
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[one + x, zero, x], [zero, one, zero], [x, zero, one + x]])


def hat_u(ring, x) -> Matrix:
    x = ring.coerce(x)
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[one + x, x, zero], [x, one + x, zero], [zero, zero, one]])


def t_hat(ring) -> Matrix:
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[one, one, one], [one, one, zero], [one, zero, one]])


def o3_prime_gram(ring) -> Matrix:
    """Gram of f'(x,y) = x1 y1 + x2 y3 + x3 y2."""
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[one, zero, zero], [zero, zero, one], [zero, one, zero]])


@dataclass(frozen=True)
class O3Data:
    """Generators of O(R^3, f) for the sum-of-products form f, plus f' data."""

    ring: object
    generators: tuple[Matrix, ...]
    parameters: tuple
    f_gram: Matrix
    f_prime_gram: Matrix
    t_matrix: Matrix


def o3_standard_form_group(ring) -> O3Data:
    """The group generated by hat L/U inside O(R^3, f), f = x1y1 + x2y2 + x3y3.

    Over a field of characteristic 2 this is the whole orthogonal group of f
    (kernel-of-q invariance pins the block shape).  Over a split quadratic
    ring the kernel of q is strictly larger than R u2 + R u3, and the full
    orthogonal group strictly contains the generated copy of SL2(R) (over
    F2[z]/(z^2) it is 8 times bigger; see the tests for the measured orders).

    For a finite ring the generator set runs over all ring elements; for an
    infinite ring the representatives use the parameter 1 (the families are
    additive in their parameter).
    """
    params = []
    if getattr(ring, "order", None) is not None:
        params = [x for x in ring.elements() if not x.is_zero()]
    elif hasattr(ring, "field") and getattr(ring.field, "order", None) is not None:
        params = [x for x in ring.elements() if not x.is_zero()]
    else:
        params = [ring.one()]
    gens = tuple(hat_l(ring, x) for x in params) + tuple(hat_u(ring, x) for x in params)
    return O3Data(ring=ring, generators=gens, parameters=tuple(params),
                  f_gram=Matrix.identity(ring, 3), f_prime_gram=o3_prime_gram(ring),
                  t_matrix=t_hat(ring))


def generate_closure(generators: Sequence[Matrix], cap: int = 10 ** 6) -> list[Matrix]:
    """Breadth-first closure of a finite matrix group; raises beyond `cap`."""
    if not generators:
        return []
    ring = generators[0].ring
    n = generators[0].nrows
    intf = try_int_field(ring)
    if intf is not None:
        gens = [intf.encode_matrix(g) for g in generators]
        ident = intf.identity(n)
        seen = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for m in frontier:
                for g in gens:
                    p = intf.mat_mul(m, g)
                    if p not in seen:
                        if len(seen) >= cap:
                            raise EnumerationTooLarge(f"closure exceeds cap {cap}")
                        seen.add(p)
                        new.append(p)
            frontier = new
        return [intf.decode_matrix(m) for m in seen]
    ident = Matrix.identity(ring, n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for m in frontier:
            for g in generators:
                p = m * g
                if p not in seen:
                    if len(seen) >= cap:
                        raise EnumerationTooLarge(f"closure exceeds cap {cap}")
                    seen.add(p)
                    new.append(p)
        frontier = new
    return list(seen)


# ---------------------------------------------------------------------------
# the representation on the K-module W and on Wz

def eta(module: KModule, a: Matrix) -> Matrix:
    """The matrix of Lambda^2 A on the K-basis B1, entries in K.

    Defined for similitudes of the underlying form; their exterior action
    commutes with J, hence is K-linear.
    """
    r = similitude_multiplier(module.hodge.form, a)
    if r is None:
        raise NotSimilitude("eta is defined on similitudes only")
    la = compound_matrix(a, module.hodge.space.ell)
    j = module.hodge.j_matrix
    columns = []
    for s in module.basis_sets:
        e = module.basis_vector(s)
        image = la * e
        # K-linearity probe on the basis (automatic for similitudes)
        if j * image != la * (j * e):
            raise NotSimilitude("exterior action fails to be K-linear")
        columns.append(module.k_coordinates(image))
    return Matrix(module.algebra, [[columns[j][i] for j in range(len(columns))]
                                   for i in range(len(module.basis_sets))])


def eta_multiplier(module: KModule, a: Matrix) -> FieldElement:
    """The similitude multiplier of eta(A) on (W, g): r^2 for multiplier r."""
    r = similitude_multiplier(module.hodge.form, a)
    if r is None:
        raise NotSimilitude("eta is defined on similitudes only")
    return r * r


def eta_o(module: KModule, a: Matrix, wz_basis: Optional[Sequence[Vector]] = None) -> Matrix:
    """The action of Lambda^2 A on Wz, in the given (or canonical) wz basis."""
    if wz_basis is None:
        wz_basis = wz_submodule(module)[0]
    la = compound_matrix(a, module.hodge.space.ell)
    wz_mat = Matrix.from_columns(module.field, list(wz_basis))
    columns = []
    for b in wz_basis:
        sol = wz_mat.solve(la * b)
        if sol is None:
            raise NotSplit("Wz is not invariant under the given map")
        columns.append(sol)
    return Matrix.from_columns(module.field, columns)


def preserves_g(module: KModule, m: Matrix) -> bool:
    """Whether a K-matrix on B1 satisfies M^T G M = G for the K-valued form."""
    return m.transpose() * module.g_gram * m == module.g_gram


def scales_g(module: KModule, m: Matrix, r) -> bool:
    return m.transpose() * module.g_gram * m == module.g_gram * module.algebra.coerce(r)


# ---------------------------------------------------------------------------
# defect 3: the sum-of-squares case

def sum_squares_basis(field) -> Matrix:
    """Columns b1..b4 turning the identity Gram into the hyperbolic-ish h~."""
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, one, one, zero],
                          [one, one, zero, zero],
                          [one, zero, one, zero],
                          [one, zero, zero, one]])


def h_tilde_gram(field) -> Matrix:
    one, zero = field.one(), field.zero()
    return Matrix(field, [[zero, zero, zero, one],
                          [zero, zero, one, zero],
                          [zero, one, zero, zero],
                          [one, zero, zero, one]])


def xi_matrix(field, t1, t2, t3) -> Matrix:
    """The unipotent isometry xi(t1,t2,t3) of h~, in the b-basis coordinates."""
    t1, t2, t3 = field.coerce(t1), field.coerce(t2), field.coerce(t3)
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, t2, t1, t3 + t1 * t2],
                          [zero, one, zero, t1],
                          [zero, zero, one, t2],
                          [zero, zero, zero, one]])


def sigma_matrix(b: Matrix) -> Matrix:
    """diag(1, B, 1) for B in SL2(F), in the b-basis coordinates."""
    field = b.ring
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, zero, zero, zero],
                          [zero, b[0, 0], b[0, 1], zero],
                          [zero, b[1, 0], b[1, 1], zero],
                          [zero, zero, zero, one]])


def _field_additive_basis(field) -> list[FieldElement]:
    """An F2-basis when the field is finite, else the single element 1."""
    if getattr(field, "k", None) is not None and field.order is not None:
        g = field.generator
        out = [field.one()]
        for _ in range(field.k - 1):
            out.append(out[-1] * g)
        return out
    return [field.one()]


def defect3_generators(field) -> list[Matrix]:
    """Generators of O(F^4, identity) in standard coordinates."""
    b = sum_squares_basis(field)
    b_inv = b.inverse()
    gens = []
    for x in _field_additive_basis(field):
        zero = field.zero()
        gens.append(b * xi_matrix(field, x, zero, zero) * b_inv)
        gens.append(b * xi_matrix(field, zero, x, zero) * b_inv)
        gens.append(b * xi_matrix(field, zero, zero, x) * b_inv)
        gens.append(b * sigma_matrix(l2(field, x)) * b_inv)
        gens.append(b * sigma_matrix(u2(field, x)) * b_inv)
    return gens


# ---------------------------------------------------------------------------
# defect 2: the two diagonal normal forms

def h1_gram(field, m) -> Matrix:
    m = field.coerce(m)
    if m.is_square():
        raise HypothesisViolated("defect 2 needs m outside the squares")
    return Matrix.diagonal(field, [m, field.one(), field.one(), field.one()])


def h2_gram(field, m) -> Matrix:
    m = field.coerce(m)
    if m.is_square():
        raise HypothesisViolated("defect 2 needs m outside the squares")
    one = field.one()
    return Matrix.diagonal(field, [m, m, one, one])


def _one_plus_block(field, block: Matrix) -> Matrix:
    top = Matrix(field, [[field.one()]])
    pad_r = Matrix.zeros(field, 1, 3)
    pad_c = Matrix.zeros(field, 3, 1)
    return Matrix.block([[top, pad_r], [pad_c, block]])


def h1_isometry_l(field, x) -> Matrix:
    """The generator diag(1, hat L_x) of O(V, H1) in standard coordinates."""
    return _one_plus_block(field, hat_l(field, x))


def h1_isometry_u(field, x) -> Matrix:
    return _one_plus_block(field, hat_u(field, x))


def h1_b_basis(field) -> Matrix:
    """b1 = e1, b2 = e2+e3+e4, b3 = e2+e3, b4 = e2+e4 (block-diagonalizes H1)."""
    return _one_plus_block(field, t_hat(field))


def _norm_block_similitude(field, m, a, b) -> Matrix:
    """diag(A, A) with A = [[a, b], [b m, a]]: multiplier a^2 + b^2 m."""
    a, b, m = field.coerce(a), field.coerce(b), field.coerce(m)
    blk = Matrix(field, [[a, b], [b * m, a]])
    z = Matrix.zeros(field, 2, 2)
    return Matrix.block([[blk, z], [z, blk]])


def h1_similitude(field, m, a, b) -> tuple[Matrix, FieldElement]:
    """A similitude of H1 with multiplier a^2 + b^2 m, in standard coordinates."""
    a, b, m = field.coerce(a), field.coerce(b), field.coerce(m)
    basis = h1_b_basis(field)
    mat = basis * _norm_block_similitude(field, m, a, b) * basis.inverse()
    return mat, a * a + b * b * m


def h2_isometry(field, m, a, b, c) -> Matrix:
    """[[E+aM, bM], [mbM, E+cM]] with M the all-ones 2x2 matrix (M^2 = 0)."""
    m, a, b, c = (field.coerce(v) for v in (m, a, b, c))
    one, zero = field.one(), field.zero()
    e = Matrix.identity(field, 2)
    mm = Matrix(field, [[one, one], [one, one]])
    return Matrix.block([[e + mm * a, mm * b], [mm * (m * b), e + mm * c]])


def h2_d_basis(field) -> Matrix:
    """d1 = e1+e2, d2 = e3+e4, d3 = e1, d4 = e4 (kernel of q first)."""
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, zero, one, zero],
                          [one, zero, zero, zero],
                          [zero, one, zero, zero],
                          [zero, one, zero, one]])


def h2_similitude(field, m, a, b) -> tuple[Matrix, FieldElement]:
    a, b, m = field.coerce(a), field.coerce(b), field.coerce(m)
    basis = h2_d_basis(field)
    mat = basis * _norm_block_similitude(field, m, a, b) * basis.inverse()
    return mat, a * a + b * b * m


def h2_eta_o_matrix(field, m, a, b, c) -> Matrix:
    """The action of the (a,b,c) isometry of H2 on Wz, in the basis
    (v1^v4)z, (v1^v3)z, (v1^v2)z.  The parameter b drops out."""
    m, a, b, c = (field.coerce(v) for v in (m, a, b, c))
    one, zero = field.one(), field.zero()
    s = a + c
    return Matrix(field, [[one + s, s, zero],
                          [s, one + s, zero],
                          [zero, zero, one]])


# ---------------------------------------------------------------------------
# defect 1

def defect1_gram(field, c3, c4) -> Matrix:
    """[[0,1],[1,1]] + diag(c3, c4) in the basis u1..u4; checks the hypotheses."""
    c3, c4 = field.coerce(c3), field.coerce(c4)
    one, zero = field.one(), field.zero()
    delta = c3 * c4
    if delta.is_square():
        raise HypothesisViolated("defect 1 needs a non-square discriminant c3*c4")
    if square_span_solve(one, [c3, c4]) is not None:
        raise HypothesisViolated("defect 1 needs 1, c3, c4 independent over the squares")
    algebra = KAlgebra(field, delta)
    if k_is_square(algebra.element(c3, 0)):
        raise HypothesisViolated("defect 1 needs c3 outside the squares of K")
    return Matrix(field, [[zero, one, zero, zero],
                          [one, one, zero, zero],
                          [zero, zero, c3, zero],
                          [zero, zero, zero, c4]])


def defect1_isometry(field, x) -> Matrix:
    """diag(U_x, E) in the u-basis coordinates."""
    x = field.coerce(x)
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, x, zero, zero],
                          [zero, one, zero, zero],
                          [zero, zero, one, zero],
                          [zero, zero, zero, one]])


def defect1_v_basis(field) -> Matrix:
    """v1 = u1+u2, v2 = u2, v3 = u3, v4 = u4: an orthogonal basis."""
    one, zero = field.one(), field.zero()
    return Matrix(field, [[one, zero, zero, zero],
                          [one, one, zero, zero],
                          [zero, zero, one, zero],
                          [zero, zero, zero, one]])


def defect1_module(field, c3, c4) -> KModule:
    """The K-module over the orthogonal v-basis diag(1, 1, c3, c4)."""
    defect1_gram(field, c3, c4)  # hypothesis check
    one = field.one()
    gram = Matrix.diagonal(field, [one, one, field.coerce(c3), field.coerce(c4)])
    return build_module(hodge(BilinearForm(gram)))


def defect1_w_basis(module: KModule) -> tuple[Matrix, Matrix]:
    """K-coordinate change to the basis w1 = v1^v3, w2 = (v1^v4)(j/c4), w3 = v1^v2.

    Returns (C, w_gram): columns of C are the w-vectors in B1 coordinates and
    w_gram = C^T G C = diag(c3, c3, 1), so w1 + w2 is g-isotropic and the
    isometries act by hat U matrices with entries in F.
    """
    algebra = module.algebra
    field = module.field
    c4 = module.hodge.form.gram[3, 3]
    zero, one = algebra.zero(), algebra.one()
    jc4 = algebra.j() * algebra.coerce(c4.inverse())
    c = Matrix(algebra, [[zero, zero, one],
                         [one, zero, zero],
                         [zero, jc4, zero]])
    w_gram = c.transpose() * module.g_gram * c
    return c, w_gram


# ---------------------------------------------------------------------------
# defect 0

def m_k(field, k) -> Matrix:
    k = field.coerce(k)
    one, zero = field.one(), field.zero()
    return Matrix(field, [[zero, k], [one, zero]])


def defect0_gram(field, a, c, b) -> Matrix:
    """diag(1, a, c, c*b); requires the four entries independent over squares."""
    a, c, b = field.coerce(a), field.coerce(c), field.coerce(b)
    one = field.one()
    entries = [one, a, c, c * b]
    if square_span_solve(entries[3], entries[:3]) is not None or \
            square_span_solve(entries[2], entries[:2]) is not None or \
            square_span_solve(entries[1], entries[:1]) is not None:
        raise HypothesisViolated("defect 0 needs diagonal entries independent over squares")
    return Matrix.diagonal(field, entries)


def defect0_gram_from_parameters(field, r, s, c, t) -> tuple[Matrix, Matrix]:
    """The Gram matrix built from a defect-0 similitude with multiplier r.

    Returns (gram in the v-basis, change to the orthogonal u-basis) where the
    u-basis Gram is diag(1, a, c, c*b) with a = r + s^2 and b = r + t^2.
    """
    r, s, c, t = (field.coerce(v) for v in (r, s, c, t))
    one, zero = field.one(), field.zero()
    gram = Matrix(field, [[one, s, zero, zero],
                          [s, r, zero, zero],
                          [zero, zero, c, c * t],
                          [zero, zero, c * t, c * r]])
    u_basis = Matrix(field, [[one, s, zero, zero],
                             [zero, one, zero, zero],
                             [zero, zero, one, t],
                             [zero, zero, zero, one]])
    return gram, u_basis


def defect0_nonsplit_similitude(field, a, b, x, y) -> tuple[Matrix, FieldElement]:
    """diag(A, psi(A)) for A = xE + yM_a, with psi(xE + yM_a) = (x + rho y)E + yM_b.

    rho = sqrt(a + b) must lie in F (the non-split case); the multiplier of a
    nonzero element is x^2 + y^2 a.
    """
    a, b, x, y = (field.coerce(v) for v in (a, b, x, y))
    rho = (a + b).sqrt()
    if rho is None:
        raise HypothesisViolated("the non-split family needs a + b a square in F")
    e = Matrix.identity(field, 2)
    top = e * x + m_k(field, a) * y
    bot = e * (x + rho * y) + m_k(field, b) * y
    z = Matrix.zeros(field, 2, 2)
    return Matrix.block([[top, z], [z, bot]]), x * x + y * y * a


def defect0_split_family(field, a, c) -> tuple[Matrix, Matrix]:
    """The commuting similitudes A (multiplier a) and C (multiplier c)."""
    a, c = field.coerce(a), field.coerce(c)
    ma = m_k(field, a)
    z = Matrix.zeros(field, 2, 2)
    e = Matrix.identity(field, 2)
    big_a = Matrix.block([[ma, z], [z, ma]])
    big_c = Matrix.block([[z, e * c], [e, z]])
    return big_a, big_c


def defect0_split_element(field, a, c, x1, x2, x3, x4) -> tuple[Matrix, FieldElement]:
    """x1 E + x2 A + x3 C + x4 AC and its multiplier x1^2 + x2^2 a + x3^2 c + x4^2 ac."""
    a, c, x1, x2, x3, x4 = (field.coerce(v) for v in (a, c, x1, x2, x3, x4))
    big_a, big_c = defect0_split_family(field, a, c)
    e4 = Matrix.identity(field, 4)
    mat = e4 * x1 + big_a * x2 + big_c * x3 + (big_a * big_c) * x4
    mult = x1 * x1 + x2 * x2 * a + x3 * x3 * c + x4 * x4 * (a * c)
    return mat, mult


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class ClassificationReport:
    defect: int
    k_split: bool
    case: str
    description: str
    multipliers: str
    generators: tuple[GroupElement, ...]
    normalizer: Matrix
    scale: FieldElement
    normal_gram: Matrix
    notes: tuple[str, ...]
    case_data: dict

    def predicted_order(self, q: int) -> Optional[int]:
        """Group order over a field with q elements, when finite."""
        sl2 = q * (q * q - 1)
        if self.case == "defect3":
            return sl2 * q * q * q
        if self.case == "defect2_nonsplit":
            return sl2
        if self.case == "defect2_split":
            return q ** 3
        if self.case == "defect1":
            return q
        if self.case == "defect0":
            return 1
        return None


_CASE_OF = {(3, True): "defect3", (2, False): "defect2_nonsplit",
            (2, True): "defect2_split", (1, False): "defect1",
            (0, True): "defect0", (0, False): "defect0"}

_DESCRIPTIONS = {
    "defect3": "O(V,h) ~= (SL2(F) semidirect F^2) x F; K splits",
    "defect2_nonsplit": "O(V,h) ~= SL2(F); K = F(j) with j^2 = m",
    "defect2_split": "O(V,h) ~= (F^3, +), elementary abelian of exponent 2; K splits",
    "defect1": "O(V,h) ~= (F, +); K is not split",
    "defect0": "q is anisotropic; O(V,q) and O(V,h) are trivial",
}

_MULTIPLIERS = {
    "defect3": "every multiplier is a square: GO(V,h) = F^x * O(V,h)",
    "defect2_nonsplit": "multipliers form the inseparable quadratic extension "
                        "F^2(m) minus 0 (all a^2 + b^2 m != 0)",
    "defect2_split": "multipliers form the inseparable quadratic extension "
                     "F^2(m) minus 0 (all a^2 + b^2 m != 0)",
    "defect1": "every multiplier is a square: GO(V,h) = F^x * O(V,h)",
}


def _check_case_tag(defect: int, k_split: bool, case: str) -> None:
    if _CASE_OF[(defect, k_split)] != case:
        raise GroupError(f"internal: case {case} does not match (defect={defect}, "
                         f"split={k_split})")


def _conjugate(s: Matrix, s_inv: Matrix, mat: Matrix) -> Matrix:
    return s * mat * s_inv


def _same_square_class(a: FieldElement, b: FieldElement) -> bool:
    return (a * b).is_square()


def _rescale_to(value: FieldElement, target: FieldElement) -> FieldElement:
    """r with r^2 * value = target (values in one square class)."""
    root = (target * value.inverse()).sqrt()
    assert root is not None
    return root


def build_case_defect3(field) -> ClassificationReport:
    """The sum-of-squares case: the identity Gram matrix over the given field."""
    return classify(BilinearForm(Matrix.identity(field, 4)))


def build_case_defect2(field, m, variant: str) -> ClassificationReport:
    """One of the two defect-2 normal forms diag(m,1,1,1) or diag(m,m,1,1)."""
    if variant == "H1":
        gram = h1_gram(field, m)
    elif variant == "H2":
        gram = h2_gram(field, m)
    else:
        raise HypothesisViolated(f"variant must be H1 or H2, got {variant!r}")
    report = classify(BilinearForm(gram))
    assert report.case_data["variant"] == variant
    return report


def build_case_defect1(field, c3, c4) -> ClassificationReport:
    """The defect-1 normal form with hyperbolic-plus-anisotropic Gram matrix."""
    return classify(BilinearForm(defect1_gram(field, c3, c4)))


def build_case_defect0(field, data) -> ClassificationReport:
    """The anisotropic case, from a Gram matrix or from parameters (r, s, c, t)."""
    if isinstance(data, Matrix):
        gram = data
    elif isinstance(data, BilinearForm):
        gram = data.gram
    else:
        r, s, c, t = data
        gram, _ = defect0_gram_from_parameters(field, r, s, c, t)
    report = classify(BilinearForm(gram))
    if report.defect != 0:
        raise HypothesisViolated(f"the supplied form has defect {report.defect}, not 0")
    return report


def classify(form: BilinearForm) -> ClassificationReport:
    """Normalize a 4-dimensional form to its defect case and build the report."""
    if form.dim != 4:
        raise FormError("the classification covers dimension 4")
    if form.is_degenerate():
        raise DegenerateForm("classification needs a non-degenerate form")
    qd = quadratic_data(form)
    field = form.field
    disc = form.gram.det()
    k_split = disc.is_square()
    defect = qd.defect

    if defect == 3:
        return _classify_defect3(form, qd, k_split)
    if defect == 2:
        return _classify_defect2(form, qd, k_split)
    if defect == 1:
        return _classify_defect1(form, qd, k_split)
    if defect == 0:
        return _classify_defect0(form, qd, k_split)
    raise GroupError(f"internal: impossible defect {defect}")


def _verified_isometries(form: BilinearForm, mats) -> tuple[GroupElement, ...]:
    one = form.field.one()
    out = []
    for m in mats:
        if not is_isometry(form, m):
            raise GroupError("internal: constructed generator fails the isometry check")
        out.append(GroupElement(matrix=m, multiplier=one))
    return tuple(out)


def _verified_similitude(form: BilinearForm, mat: Matrix,
                         expected: FieldElement) -> GroupElement:
    r = similitude_multiplier(form, mat)
    if r is None or r != expected:
        raise GroupError("internal: constructed similitude has the wrong multiplier")
    return GroupElement(matrix=mat, multiplier=r)


def _classify_defect3(form, qd, k_split) -> ClassificationReport:
    field = form.field
    c1 = qd.values[0]
    columns = []
    for v, c in zip(qd.basis, qd.values):
        columns.append(v.scale(_rescale_to(c, c1).inverse()))
    s = Matrix.from_columns(field, columns)
    normal = Matrix.identity(field, 4)
    assert (s.transpose() * form.gram * s) == normal * c1
    s_inv = s.inverse()
    gens = [_conjugate(s, s_inv, g) for g in defect3_generators(field)]
    report = ClassificationReport(
        defect=3, k_split=True, case="defect3",
        description=_DESCRIPTIONS["defect3"],
        multipliers=_MULTIPLIERS["defect3"],
        generators=_verified_isometries(form, gens),
        normalizer=s, scale=c1, normal_gram=normal,
        notes=("generators: xi(t1,t2,t3) spanning Xi and diag(1,B,1) with "
               "B in SL2(F), transported from the hyperbolic coordinates",),
        case_data={"b_basis": sum_squares_basis(field),
                   "h_tilde": h_tilde_gram(field)})
    _check_case_tag(3, k_split, report.case)
    return report


def _defect2_normal_form(form, qd):
    """Iterate the two-entry rewriting step until diag(m,1,1,1) or diag(m,m,1,1)."""
    field = form.field
    vecs = list(qd.basis)
    vals = list(qd.values)

    def class_count():
        reps: list[FieldElement] = []
        for v in vals:
            if not any(_same_square_class(v, r) for r in reps):
                reps.append(v)
        return len(reps)

    def t_step(i, j, target_idx):
        # rewrite the orthogonal pair (slot i, slot j) so that slot j takes the
        # value of slot target_idx: c_target = s^2 c_i + t^2 c_j
        sol = square_span_solve(vals[target_idx], [vals[i], vals[j]])
        assert sol is not None
        sv, tv = sol
        fi = vecs[i].scale(tv * vals[j]) + vecs[j].scale(sv * vals[i])
        fj = vecs[i].scale(sv) + vecs[j].scale(tv)
        new_val = (tv * vals[j]) ** 2 * vals[i] + (sv * vals[i]) ** 2 * vals[j]
        vecs[i], vals[i] = fi, new_val
        vecs[j], vals[j] = fj, vals[target_idx]

    def rescale(i, target):
        r = _rescale_to(vals[i], target)
        vecs[i] = vecs[i].scale(r)
        vals[i] = target

    # put an independent pair in slots 0, 1 (first pair in lex order)
    pair = next(((i, j) for i in range(4) for j in range(i + 1, 4)
                 if not _same_square_class(vals[i], vals[j])), None)
    assert pair is not None
    order = [pair[0], pair[1]] + [k for k in range(4) if k not in pair]
    vecs = [vecs[k] for k in order]
    vals = [vals[k] for k in order]

    before = class_count()
    # slot 2 relative to slot 0, exactly as in the two-entry rewriting argument
    if _same_square_class(vals[2], vals[0]):
        rescale(2, vals[0])
    else:
        t_step(0, 2, 1)  # now slots 1 and 2 both carry c2
    assert class_count() <= before

    dup_value = vals[2]
    single_idx = next(k for k in range(3) if not _same_square_class(vals[k], dup_value))
    if _same_square_class(vals[3], dup_value):
        rescale(3, dup_value)
        variant = "H1"
    elif _same_square_class(vals[3], vals[single_idx]):
        rescale(3, vals[single_idx])
        variant = "H2"
    else:
        before = class_count()
        t_step(single_idx, 3, [k for k in range(3) if k != single_idx][0])
        assert class_count() < before
        variant = "H1"

    if variant == "H1":
        single_idx = next(k for k in range(4)
                          if not _same_square_class(vals[k], dup_value))
        for k in range(4):
            if k != single_idx:
                rescale(k, dup_value)
        order = [single_idx] + [k for k in range(4) if k != single_idx]
        vecs = [vecs[k] for k in order]
        vals = [vals[k] for k in order]
        scale = vals[1]
        m = vals[0] * scale.inverse()
    else:
        pair_a = [k for k in range(4) if _same_square_class(vals[k], dup_value)]
        pair_b = [k for k in range(4) if k not in pair_a]
        for k in pair_a:
            rescale(k, dup_value)
        for k in pair_b:
            rescale(k, vals[pair_b[0]])
        # m goes first: diag(m, m, 1, 1) with m = (dup value)/(other pair value)
        scale = vals[pair_b[0]]
        m = vals[pair_a[0]] * scale.inverse()
        vecs = [vecs[k] for k in pair_a + pair_b]
        vals = [vals[k] for k in pair_a + pair_b]

    assert not m.is_square()
    s = Matrix.from_columns(form.field, vecs)
    return s, scale, m, variant


def _classify_defect2(form, qd, k_split) -> ClassificationReport:
    field = form.field
    s, scale, m, variant = _defect2_normal_form(form, qd)
    s_inv = s.inverse()
    if variant == "H1":
        normal = h1_gram(field, m)
        case = "defect2_nonsplit"
        gens = [_conjugate(s, s_inv, h1_isometry_l(field, field.one())),
                _conjugate(s, s_inv, h1_isometry_u(field, field.one()))]
        sim_mat, sim_mult = h1_similitude(field, m, field.zero(), field.one())
        notes = ("isometries diag(1, hat L_x) and diag(1, hat U_x), x in F, "
                 "generate O; similitudes diag(A, A) with A = [[a,b],[bm,a]] "
                 "realize every multiplier a^2 + b^2 m",)
    else:
        normal = h2_gram(field, m)
        case = "defect2_split"
        one, zero = field.one(), field.zero()
        gens = [_conjugate(s, s_inv, h2_isometry(field, m, one, zero, zero)),
                _conjugate(s, s_inv, h2_isometry(field, m, zero, one, zero)),
                _conjugate(s, s_inv, h2_isometry(field, m, zero, zero, one))]
        sim_mat, sim_mult = h2_similitude(field, m, field.zero(), field.one())
        notes = ("O(V,h) = {[[E+aM, bM],[mbM, E+cM]]: a,b,c in F} with M the "
                 "all-ones matrix; the action on Wz has kernel {a = c}",)
    assert (s.transpose() * form.gram * s) == normal * scale
    generators = _verified_isometries(form, gens)
    similitude = _verified_similitude(form, _conjugate(s, s_inv, sim_mat), sim_mult)
    report = ClassificationReport(
        defect=2, k_split=k_split, case=case,
        description=_DESCRIPTIONS[case], multipliers=_MULTIPLIERS[case],
        generators=generators,
        normalizer=s, scale=scale, normal_gram=normal,
        notes=notes,
        case_data={"m": m, "variant": variant, "similitude": similitude})
    _check_case_tag(2, k_split, case)
    return report


def _classify_defect1(form, qd, k_split) -> ClassificationReport:
    field = form.field
    u1 = qd.kernel[0]
    anchor = next(i for i in range(4)
                  if not form.evaluate(u1, Vector.unit(field, 4, i)).is_zero())
    e = Vector.unit(field, 4, anchor)
    u2_vec = e.scale(form.evaluate(u1, e).inverse())
    s_val = form.q(u2_vec)
    assert not s_val.is_zero(), "defect 1 forces h(u2,u2) != 0"
    u1s = u1.scale(s_val)

    rows = [[form.evaluate(u1, Vector.unit(field, 4, j)) for j in range(4)],
            [form.evaluate(u2_vec, Vector.unit(field, 4, j)) for j in range(4)]]
    complement = Matrix(field, rows).kernel_basis()
    assert len(complement) == 2
    sub_gram = Matrix(field, [[form.evaluate(x, y) * s_val.inverse() for y in complement]
                              for x in complement])
    sub_basis, sub_diag = orthogonalize(BilinearForm(sub_gram))
    u3 = complement[0].scale(sub_basis[0][0]) + complement[1].scale(sub_basis[0][1])
    u4 = complement[0].scale(sub_basis[1][0]) + complement[1].scale(sub_basis[1][1])
    c3, c4 = sub_diag

    s = Matrix.from_columns(field, [u1s, u2_vec, u3, u4])
    normal = defect1_gram(field, c3, c4)
    assert (s.transpose() * form.gram * s) == normal * s_val
    s_inv = s.inverse()
    gens = [_conjugate(s, s_inv, defect1_isometry(field, field.one()))]
    report = ClassificationReport(
        defect=1, k_split=False, case="defect1",
        description=_DESCRIPTIONS["defect1"], multipliers=_MULTIPLIERS["defect1"],
        generators=_verified_isometries(form, gens),
        normalizer=s, scale=s_val, normal_gram=normal,
        notes=("O(V,h) = {diag(U_x, E): x in F} in the u-basis; on the K-basis "
               "(v1^v3, (v1^v4)(j/c4), v1^v2) the form g is diag(c3, c3, 1) and "
               "eta sends the generator family to hat U_x",),
        case_data={"c3": c3, "c4": c4})
    _check_case_tag(1, k_split, "defect1")
    return report


def _classify_defect0(form, qd, k_split) -> ClassificationReport:
    field = form.field
    d1 = qd.values[0]
    s = Matrix.from_columns(field, list(qd.basis))
    a = qd.values[1] * d1.inverse()
    c = qd.values[2] * d1.inverse()
    d4 = qd.values[3] * d1.inverse()
    b = d4 * c.inverse()
    normal = defect0_gram(field, a, c, b)
    assert (s.transpose() * form.gram * s) == normal * d1
    s_inv = s.inverse()

    notes = []
    case_data: dict = {"a": a, "c": c, "b": b}
    similitudes: list[GroupElement] = []
    norm_form = BilinearForm(normal)
    if a == b:
        big_a, big_c = defect0_split_family(field, a, c)
        for mat, mult in ((big_a, a), (big_c, c)):
            r = similitude_multiplier(norm_form, mat)
            assert r == mult
            similitudes.append(_verified_similitude(form, _conjugate(s, s_inv, mat), mult))
        multipliers = ("every element of E = F^2(a) + F^2(a)c occurs as a "
                       "multiplier; GO(V,h) is sharply transitive on V minus 0")
        notes.append("split sub-case (a = b): the similitudes F(A,C) form a "
                     "field acting sharply transitively")
        case_data["subcase"] = "split"
    elif (a + b).is_square():
        mat, mult = defect0_nonsplit_similitude(field, a, b, field.zero(), field.one())
        r = similitude_multiplier(norm_form, mat)
        assert r == mult
        similitudes.append(_verified_similitude(form, _conjugate(s, s_inv, mat), mult))
        multipliers = ("multipliers form F^2(a) minus 0, the multiplicative "
                       "group of an inseparable quadratic extension of F^2")
        notes.append("non-split sub-case (rho = sqrt(a+b) in F): similitudes "
                     "are the nonzero elements of the field L = {diag(A, psi(A))}")
        case_data["subcase"] = "nonsplit"
        case_data["rho"] = (a + b).sqrt()
    else:
        multipliers = ("no similitude with non-square multiplier found among "
                       "the constructed families; F^x * id is realized")
        notes.append("similitude analysis skipped: the diagonal (1,a,c,cb) "
                     "fits neither constructed family (a+b not a square, a != b)")
        case_data["subcase"] = "none"

    report = ClassificationReport(
        defect=0, k_split=k_split, case="defect0",
        description=_DESCRIPTIONS["defect0"], multipliers=multipliers,
        generators=tuple(similitudes),
        normalizer=s, scale=d1, normal_gram=normal,
        notes=tuple(notes), case_data=case_data)
    _check_case_tag(0, k_split, "defect0")
    return report
