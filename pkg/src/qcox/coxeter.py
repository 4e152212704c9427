"""Reflection machinery over the polynomial ring.

Two flavors of reflection act on the vertex lattice:

* graph reflections, built from edge counts of the underlying graph: the
  reflection at vertex i sends e_i to -e_i and adds q * (edge count) * e_i
  to every neighbour's image;
* Cartan reflections, built from the symmetrized inverse Cartan matrix
  A = C^-1 + (C^-1)^T: the reflection at i subtracts A[i][j] * e_i from
  the image of e_j.

Multiplying the reflection matrices along an admissible vertex ordering
(every vertex a sink once its predecessors are deleted) gives the Coxeter
matrix; on relation-free quivers both flavors agree, and on any quiver
with unimodular Cartan matrix the product equals -C^T C^-1, which is also
how the Coxeter matrix is defined when no admissible ordering exists.

``verify_identities`` runs every identity the library promises on a given
bound quiver and reports pass/fail/skipped per identity, skipping the ones
whose hypotheses the input does not meet.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import DEFAULT_DEGREE_CAP, cartan_matrix, dim_vector
from .errors import (DegreeCapExceeded, LoopAtVertex, NotAcyclic,
                     NotUnimodular)
from .polyring import ONE, Polynomial, PolyMatrix, poly_vector
from .quiverdsl import Arrow, BoundQuiver, Quiver

_HALF_Q = Polynomial([0, Fraction(1, 2)])
_Q = Polynomial([0, 1])


# --- admissible numberings ---------------------------------------------------

def admissible_numbering(quiver: Quiver, prefer_largest: bool = False) -> tuple[int, ...]:
    """Sink-first vertex ordering: each entry is a sink of the subquiver on
    the not-yet-listed vertices.  Deterministic: the smallest-index sink is
    taken at every step (largest with ``prefer_largest``).

    Raises NotAcyclic when some step has no sink.
    """
    remaining = set(range(quiver.n))
    order = []
    while remaining:
        has_out = {a.source for a in quiver.arrows
                   if a.source in remaining and a.target in remaining}
        sinks = [v for v in sorted(remaining, reverse=prefer_largest) if v not in has_out]
        if not sinks:
            raise NotAcyclic("quiver has a directed cycle, no admissible numbering exists")
        order.append(sinks[0])
        remaining.discard(sinks[0])
    return tuple(order)


# --- graph reflections ---------------------------------------------------------

@dataclass(frozen=True)
class ReflectionMatrix:
    """A reflection with its acting vertex and flavor ("graph" or "cartan")."""

    matrix: PolyMatrix
    vertex: int
    flavor: str


def graph_reflection(quiver: Quiver, i: int) -> ReflectionMatrix:
    """Reflection at vertex i from edge counts; differs from the identity
    only in row i.  Raises LoopAtVertex if i carries a loop."""
    n = quiver.n
    if not 0 <= i < n:
        raise ValueError(f"vertex index {i} out of range")
    counts = quiver.edge_counts()
    if any(a.source == i and a.target == i for a in quiver.arrows):
        raise LoopAtVertex(quiver.vertices[i])
    rows = [[ONE if r == c else Polynomial() for c in range(n)] for r in range(n)]
    for j in range(n):
        if j == i:
            rows[i][i] = Polynomial([-1])
        elif counts[i][j]:
            rows[i][j] = Polynomial([0, counts[i][j]])
    return ReflectionMatrix(PolyMatrix(rows), i, "graph")


def coxeter_matrix_graph(quiver: Quiver, numbering: tuple[int, ...] | None = None) -> PolyMatrix:
    """Product of graph reflections along an admissible numbering, first
    sink leftmost.  Independent of which admissible numbering is chosen."""
    if numbering is None:
        numbering = admissible_numbering(quiver)
    out = None
    for v in numbering:
        s = graph_reflection(quiver, v).matrix
        out = s if out is None else out * s
    return out


def gram_matrix(quiver: Quiver) -> PolyMatrix:
    """Matrix G of the graph bilinear form, so that (x, y) = x^T G y.
    Half-integer coefficients are exact rationals."""
    n = quiver.n
    counts = quiver.arrow_counts()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            both = counts[i][j] + counts[j][i]
            diag = ONE if i == j else Polynomial()
            row.append(diag - _HALF_Q * both if both else diag)
        rows.append(row)
    return PolyMatrix(rows)


def bilinear_form_graph(quiver: Quiver, x, y) -> Polynomial:
    """Symmetric bilinear form: the coordinate dot product minus q/2 times
    the sum over arrows of the two cross terms at the arrow's endpoints."""
    xv, yv = poly_vector(x), poly_vector(y)
    n = quiver.n
    if len(xv) != n or len(yv) != n:
        raise ValueError(f"vectors must have length {n}")
    dot = Polynomial()
    for a, b in zip(xv, yv):
        dot = dot + a * b
    cross = Polynomial()
    for arrow in quiver.arrows:
        cross = cross + xv[arrow.source] * yv[arrow.target] + xv[arrow.target] * yv[arrow.source]
    return dot - _HALF_Q * cross


def quadratic_form_graph(quiver: Quiver, x) -> Polynomial:
    """Quadratic form: sum of squares minus q times the edge-count-weighted
    products over vertex pairs.  Equals the bilinear form on (x, x)."""
    xv = poly_vector(x)
    n = quiver.n
    if len(xv) != n:
        raise ValueError(f"vector must have length {n}")
    counts = quiver.arrow_counts()
    total = Polynomial()
    for i in range(n):
        total = total + xv[i] * xv[i]
        if counts[i][i]:
            total = total - _Q * counts[i][i] * xv[i] * xv[i]
        for j in range(i + 1, n):
            pair = counts[i][j] + counts[j][i]
            if pair:
                total = total - _Q * pair * xv[i] * xv[j]
    return total


def sigma_reflect(quiver: Quiver, vertex: int) -> Quiver:
    """Reverse every arrow incident to the vertex; names are kept."""
    if not 0 <= vertex < quiver.n:
        raise ValueError(f"vertex index {vertex} out of range")
    arrows = tuple(
        Arrow(a.name, a.target, a.source) if vertex in (a.source, a.target) else a
        for a in quiver.arrows)
    return Quiver(quiver.vertices, arrows)


# --- Cartan reflections ---------------------------------------------------------

def symmetric_form_matrix(cartan: PolyMatrix,
                          inverse: PolyMatrix | None = None) -> PolyMatrix:
    """Symmetrized inverse Cartan matrix A = C^-1 + (C^-1)^T.

    Raises NotUnimodular unless det(C) is +1 or -1.
    """
    if inverse is None:
        inverse = cartan.inverse_unimodular()
    return inverse + inverse.transpose()


def gamma_reflection(cartan: PolyMatrix, i: int,
                     form_matrix: PolyMatrix | None = None) -> ReflectionMatrix:
    """Cartan reflection at vertex i: e_j maps to e_j - A[i][j] e_i, so the
    matrix differs from the identity only in row i."""
    if form_matrix is None:
        form_matrix = symmetric_form_matrix(cartan)
    n = form_matrix.n
    if not 0 <= i < n:
        raise ValueError(f"vertex index {i} out of range")
    rows = [[ONE if r == c else Polynomial() for c in range(n)] for r in range(n)]
    for j in range(n):
        a_ij = form_matrix.entry(i, j)
        rows[i][j] = ONE - a_ij if i == j else -a_ij
    return ReflectionMatrix(PolyMatrix(rows), i, "cartan")


def coxeter_matrix_bound(bq: BoundQuiver, method: str = "cartan",
                         degree_cap: int = DEFAULT_DEGREE_CAP,
                         cartan: PolyMatrix | None = None) -> PolyMatrix:
    """Coxeter matrix of a bound quiver.

    method="cartan" computes -C^T C^-1 and works for any quiver whose
    graded dimensions terminate with unimodular Cartan matrix.
    method="reflections" multiplies Cartan reflections along an admissible
    numbering and additionally needs the quiver to be acyclic.  The two
    agree on acyclic input.
    """
    if cartan is None:
        cartan = cartan_matrix(bq, degree_cap)
    if method == "cartan":
        inverse = cartan.inverse_unimodular()
        return -(cartan.transpose() * inverse)
    if method == "reflections":
        numbering = admissible_numbering(bq.quiver)
        form = symmetric_form_matrix(cartan)
        out = None
        for v in numbering:
            s = gamma_reflection(cartan, v, form).matrix
            out = s if out is None else out * s
        return out
    raise ValueError(f"method must be 'reflections' or 'cartan', got {method!r}")


def euler_form(cartan: PolyMatrix, x, y,
               inverse: PolyMatrix | None = None) -> Polynomial:
    """Bilinear Euler form x^T C^-1 y; vector entries may be polynomials."""
    if inverse is None:
        inverse = cartan.inverse_unimodular()
    xv, yv = poly_vector(x), poly_vector(y)
    if len(xv) != inverse.n or len(yv) != inverse.n:
        raise ValueError(f"vectors must have length {inverse.n}")
    mid = inverse.mul_vector(yv)
    total = Polynomial()
    for a, b in zip(xv, mid):
        total = total + a * b
    return total


def symmetric_euler_form(cartan: PolyMatrix, x, y,
                         inverse: PolyMatrix | None = None) -> Polynomial:
    """Symmetrized Euler form (x, y) = x^T A y / 2 with A = C^-1 + C^-T."""
    if inverse is None:
        inverse = cartan.inverse_unimodular()
    half = euler_form(cartan, x, y, inverse) + euler_form(cartan, y, x, inverse)
    return Polynomial([Fraction(1, 2)]) * half


# --- identity verification ------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    identity: str
    status: str            # "pass" | "fail" | "skipped"
    reason: str = ""


@dataclass(frozen=True)
class CheckReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json_obj(self) -> list[dict]:
        return [{"identity": c.identity, "status": c.status, "reason": c.reason}
                for c in self.checks]


def verify_identities(bq: BoundQuiver, samples: int = 10, seed: int = 0,
                      degree_cap: int = DEFAULT_DEGREE_CAP) -> CheckReport:
    """Verify every applicable identity as an exact polynomial-matrix
    equation; inapplicable ones are reported as skipped with the reason."""
    quiver = bq.quiver
    n = quiver.n
    results: list[CheckResult] = []
    add = results.append

    acyclic = quiver.is_acyclic()
    loop_free = not quiver.loops()
    relation_free = not bq.relations
    counts = quiver.edge_counts()
    identity_m = PolyMatrix.identity(n)

    def verdict(name: str, ok: bool, why_fail: str = "") -> None:
        add(CheckResult(name, "pass" if ok else "fail", "" if ok else why_fail))

    # graph-level identities need an acyclic orientation without loops
    graph_ok = acyclic and loop_free
    graph_skip = "requires an acyclic quiver" if not acyclic else "requires a loop-free quiver"
    if graph_ok:
        refl = [graph_reflection(quiver, i).matrix for i in range(n)]
        verdict("reflection_involution",
                all((s * s).is_identity() for s in refl))
        verdict("reflection_commutation",
                all(refl[i] * refl[j] == refl[j] * refl[i]
                    for i in range(n) for j in range(i + 1, n) if counts[i][j] == 0))
        braid_ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if counts[i][j] == 0:
                    continue
                m_q = Polynomial([0, 0, counts[i][j] * counts[j][i]])
                left = refl[i] * refl[j] * refl[i] - refl[j] * refl[i] * refl[j]
                right = (refl[i] - refl[j]).scaled(m_q - ONE)
                braid_ok = braid_ok and left == right
        verdict("reflection_braid", braid_ok)
        gram = gram_matrix(quiver)
        verdict("form_invariance",
                all(s.transpose() * gram * s == gram for s in refl))
        first = admissible_numbering(quiver)
        second = admissible_numbering(quiver, prefer_largest=True)
        if first == second:
            add(CheckResult("coxeter_numbering_independence", "skipped",
                            "only one admissible numbering available"))
        else:
            verdict("coxeter_numbering_independence",
                    coxeter_matrix_graph(quiver, first) == coxeter_matrix_graph(quiver, second))
    else:
        for name in ("reflection_involution", "reflection_commutation",
                     "reflection_braid", "form_invariance",
                     "coxeter_numbering_independence"):
            add(CheckResult(name, "skipped", graph_skip))

    # Cartan matrix of the bound quiver, shared by everything below
    try:
        cartan = cartan_matrix(bq, degree_cap)
        cartan_reason = ""
    except DegreeCapExceeded as exc:
        cartan = None
        cartan_reason = f"graded dimensions did not terminate ({exc})"
    inverse = None
    if cartan is not None:
        try:
            inverse = cartan.inverse_unimodular()
        except NotUnimodular as exc:
            cartan_reason = f"Cartan matrix is not unimodular ({exc})"

    # relation-free theorems compare graph products against the Cartan matrix
    if graph_ok and relation_free and inverse is not None:
        phi = coxeter_matrix_graph(quiver)
        verdict("coxeter_vs_cartan",
                phi == -(cartan.transpose() * inverse))
        sink_c_ok = True
        sink_phi_ok = True
        for i in quiver.sinks():
            s = graph_reflection(quiver, i).matrix
            flipped = sigma_reflect(quiver, i)
            flipped_c = cartan_matrix(BoundQuiver(flipped), degree_cap)
            flipped_phi = coxeter_matrix_graph(flipped)
            sink_c_ok = sink_c_ok and flipped_c == s * cartan * s.transpose()
            sink_phi_ok = sink_phi_ok and flipped_phi == s * phi * s
        verdict("sink_reflection_cartan", sink_c_ok)
        verdict("sink_reflection_coxeter", sink_phi_ok)
    else:
        if not graph_ok:
            reason = graph_skip
        elif not relation_free:
            reason = "requires a relation-free quiver"
        else:
            reason = cartan_reason
        for name in ("coxeter_vs_cartan", "sink_reflection_cartan",
                     "sink_reflection_coxeter"):
            add(CheckResult(name, "skipped", reason))

    if inverse is None:
        for name in ("gamma_involution", "gamma_commutation",
                     "gamma_coxeter_vs_cartan", "gamma_numbering_independence",
                     "projective_injective_duality", "euler_form_coxeter"):
            add(CheckResult(name, "skipped", cartan_reason))
        return CheckReport(tuple(results))

    form = symmetric_form_matrix(cartan, inverse)
    gammas = [gamma_reflection(cartan, i, form).matrix for i in range(n)]

    involutive = [i for i in range(n) if form.entry(i, i) == 2]
    if involutive:
        verdict("gamma_involution",
                all((gammas[i] * gammas[i]).is_identity() for i in involutive))
    else:
        add(CheckResult("gamma_involution", "skipped",
                        "no vertex with diagonal form entry 2"))
    commuting_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
                       if form.entry(i, j).is_zero()]
    if commuting_pairs:
        verdict("gamma_commutation",
                all(gammas[i] * gammas[j] == gammas[j] * gammas[i]
                    for i, j in commuting_pairs))
    else:
        add(CheckResult("gamma_commutation", "skipped",
                        "no vertex pair with vanishing form entry"))

    phi_cartan = -(cartan.transpose() * inverse)
    if acyclic:
        numbering = admissible_numbering(quiver)
        product = None
        for v in numbering:
            product = gammas[v] if product is None else product * gammas[v]
        verdict("gamma_coxeter_vs_cartan", product == phi_cartan)
        alt = admissible_numbering(quiver, prefer_largest=True)
        if alt == numbering:
            add(CheckResult("gamma_numbering_independence", "skipped",
                            "only one admissible numbering available"))
        else:
            alt_product = None
            for v in alt:
                alt_product = gammas[v] if alt_product is None else alt_product * gammas[v]
            verdict("gamma_numbering_independence", alt_product == product)
    else:
        for name in ("gamma_coxeter_vs_cartan", "gamma_numbering_independence"):
            add(CheckResult(name, "skipped", "requires an acyclic quiver"))

    duality_ok = True
    for i in range(n):
        projective = dim_vector(bq, "projective", i, cartan=cartan)
        injective = dim_vector(bq, "injective", i, cartan=cartan)
        image = phi_cartan.mul_vector(injective)
        duality_ok = duality_ok and all((a + b).is_zero()
                                        for a, b in zip(projective, image))
    verdict("projective_injective_duality", duality_ok,
            "projective vector differs from -Phi * injective vector")

    rng = random.Random(seed)
    euler_ok = True
    for _ in range(samples):
        x = [rng.randint(-5, 5) for _ in range(n)]
        y = [rng.randint(-5, 5) for _ in range(n)]
        direct = euler_form(cartan, x, y, inverse)
        swapped = euler_form(cartan, phi_cartan.mul_vector(y), x, inverse)
        rotated = euler_form(cartan, phi_cartan.mul_vector(x),
                             phi_cartan.mul_vector(y), inverse)
        euler_ok = euler_ok and direct == -swapped and direct == rotated
    verdict("euler_form_coxeter", euler_ok)

    return CheckReport(tuple(results))
