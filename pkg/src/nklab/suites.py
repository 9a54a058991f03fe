"""Verification suites. Each returns a :class:`SuiteReport` of named, anchored checks."""
from __future__ import annotations

import itertools
import traceback

import numpy as np
import scipy.linalg

from . import catalog, cone, maslov
from .config import SUITES, RunConfig
from .errors import NKLabError, PreconditionError
from .index import (IndexConfig, admissible_basis, dbar_kernel, index_verdict, negative_count,
                    positive_subbasis, quadratic_form_matrix, verify_index_bound)
from .octonion import (PHI0, PSI0, coassociative_residual, complement_basis, cross, cross_from_product,
                       g2_gram, is_associative_plane, multiplication_table, octonion_multiply, star_phi0)
from .report import Stopwatch, SuiteReport, residual, verdict
from .sphere import (check_curvature_identity, check_structure_equations, normalize, random_point,
                     random_tangent, riemann, riemann_derivative, su3_frame, torsion_residuals)
from .surface import (LocalGeometry, adapt_u2_frame, boundary_orthogonality, holomorphic_defects,
                      holomorphic_symmetry_residuals, hopf_coefficients, ricci_equation_residual,
                      rigidity_probe, torsion_normal_residual, weingarten_residual)
from .variation import (NKSecondVariation, VariationFamily, area, area_second_difference,
                        boundary_term_residual, pointwise_residuals, richardson_change,
                        second_variation_general)


def _rng(cfg: RunConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITES.index(suite)])


def _perm_sign(p) -> int:
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _alternation(T: np.ndarray) -> float:
    return max(float(np.max(np.abs(T.transpose(p) - _perm_sign(p) * T)))
               for p in itertools.permutations(range(T.ndim)))


# algebra ----------------------------------------------------------------------------

def algebra(cfg: RunConfig) -> SuiteReport:
    rep, sw, rng = SuiteReport("algebra"), Stopwatch(), _rng(cfg, "algebra")
    tol = cfg.tol("algebra")
    x, y = rng.standard_normal((2, cfg.samples, 7))
    lhs = np.sum(cross(x, y) ** 2, axis=-1)
    xx, yy, xy = np.sum(x * x, -1), np.sum(y * y, -1), np.sum(x * y, -1)
    rel = np.abs(lhs - (xx * yy - xy ** 2)) / (xx * yy)
    rep.add(residual("cross_norm", "cross product norm identity |x×y|² = |x|²|y|² − <x,y>²",
                     np.max(rel), tol), sw.lap())
    rep.add(residual("phi0_alternating", "φ₀ alternating on all basis triples", _alternation(PHI0.tensor), tol),
            sw.lap())
    rep.add(residual("psi0_alternating", "∗φ₀ alternating on all basis quadruples",
                     _alternation(PSI0.tensor), tol), sw.lap())
    rep.add(residual("b_phi_metric", "metric recovery B_φ(v,w) = <v,w> vol",
                     np.max(np.abs(g2_gram(PHI0) - np.eye(7))), tol), sw.lap())
    z = rng.standard_normal((cfg.samples, 4, 7))
    star = max(abs(star_phi0(*v) - PSI0(*v)) for v in z)
    rep.add(residual("star_phi0", "∗φ₀ from the Hodge star agrees with the explicit 4-form", star, tol),
            sw.lap())
    a, b = rng.standard_normal((2, cfg.samples, 8))
    na = np.linalg.norm(a, axis=-1) * np.linalg.norm(b, axis=-1)
    ab = np.array([np.linalg.norm(octonion_multiply(u, v)) for u, v in zip(a, b)])
    rep.add(residual("octonion_norm", "octonion norm is multiplicative", np.max(np.abs(ab - na) / na), tol),
            sw.lap())
    diff = max(float(np.max(np.abs(cross_from_product(u, v) - cross(u, v)))) for u, v in zip(x, y))
    rep.add(residual("cross_from_product", "x × y = Im(xy) for imaginary octonions", diff, tol), sw.lap())
    table = multiplication_table()
    ok = all(table[i][i] == "-1" for i in range(7)) and all(
        table[i][j][1:] == table[j][i][1:] and table[i][j][0] != table[j][i][0]
        for i in range(7) for j in range(7) if i != j)
    rep.add(verdict("multiplication_table", "imaginary units anticommute and square to −1", ok,
                    "consistent" if ok else "inconsistent"), sw.lap())
    V = catalog.lagrangian_plane()
    rep.add(residual("coassociative_plane", "φ₀ vanishes on the searched coassociative 4-plane",
                     coassociative_residual(V), cfg.tol("coassociative")), sw.lap())
    A = complement_basis(V)
    ok = is_associative_plane(*A, tol=cfg.tol("coassociative"))
    rep.add(verdict("associative_complement", "the orthogonal complement of a coassociative plane is associative",
                    ok, bool(ok)), sw.lap())
    return rep


# nearly-Kähler identities --------------------------------------------------------------

def nk_identities(cfg: RunConfig) -> SuiteReport:
    rep, sw, rng = SuiteReport("nk-identities"), Stopwatch(), _rng(cfg, "nk-identities")
    tol, stol = cfg.tol("identity"), cfg.tol("structure")
    worst: dict = {}
    for _ in range(cfg.samples):
        p = random_point(rng)
        X, Y = (normalize(random_tangent(rng, p)) for _ in range(2))
        for k, v in torsion_residuals(p, X, Y).items():
            worst[k] = max(worst.get(k, 0.0), v)
        worst["curvature"] = max(worst.get("curvature", 0.0), check_curvature_identity(p, X, Y))
        for k, v in check_structure_equations(p, rng, trials=1).items():
            worst[k] = max(worst.get(k, 0.0), v)
    anchors = {
        "antisymmetry": ("torsion antisymmetry (∇_X J)Y = −(∇_Y J)X", tol),
        "diagonal": ("nearly-Kähler condition (∇_X J)X = 0", tol),
        "j_antilinear": ("torsion symmetry P(X, JY) = −J P(X, Y)", tol),
        "constant_type": ("constant type |P(X,Y)|² = λ²(|X|²|Y|² − <X,Y>² − <JX,Y>²), λ = 1", tol),
        "closed_form": ("torsion from the derivative of J matches the cross-product formula", tol),
        "curvature": ("nearly-Kähler curvature identity relating R and |P(X,Y)|²", tol),
        "d_omega": ("structure equation dω = 3λ Im Υ", stol),
        "d_re_upsilon": ("structure equation d Re Υ = 2λ ω∧ω", stol),
        "d_im_upsilon": ("structure equation d Im Υ = 0 for this phase", stol),
        "nabla_omega": ("∇ω = ⅓ dω", stol),
    }
    for k, (anchor, t) in anchors.items():
        rep.add(residual(k, anchor, worst[k], t))
    sw.lap()
    gen = {"d_omega": 0.0, "d_re_upsilon": 0.0, "d_im_upsilon": 0.0}
    for _ in range(max(4, cfg.samples // 5)):
        p = random_point(rng)
        r = check_structure_equations(p, rng, trials=1, theta=float(rng.uniform(0, 2 * np.pi)))
        for k in gen:
            gen[k] = max(gen[k], r[k])
    rep.add(residual("structure_generic_theta", "dω = 3λ(cos θ Re Υ_θ + sin θ Im Υ_θ) and its companions, random θ",
                     max(gen.values()), stol, details=gen), sw.lap())
    rd = 0.0
    for _ in range(max(4, cfg.samples // 5)):
        p = random_point(rng)
        v = [random_tangent(rng, p) for _ in range(4)]
        rd = max(rd, abs(riemann(p, *v) - riemann_derivative(p, *v)))
    rep.add(residual("riemann_derivative", "constant curvature 1 from differentiating the Levi-Civita connection",
                     rd, tol), sw.lap())
    consts, fr = [], 0.0
    for _ in range(20):
        f = su3_frame(random_point(rng))
        res = f.residuals()
        fr = max(fr, res["orthonormal"], res["complex_pairs"], res["tangent"])
        consts.append(abs(f.upsilon_value()))
    rep.add(residual("su3_frame", "adapted SU(3) frames are orthonormal with e_{2k} = J e_{2k−1}", fr, tol),
            sw.lap())
    rep.add(verdict("upsilon_normalization", "measured |Υ(f1,f2,f3)| on unitary frames",
                    bool(np.ptp(consts) < tol), float(np.mean(consts)),
                    details={"spread": float(np.ptp(consts))}), sw.lap())
    return rep


# surface geometry ----------------------------------------------------------------------

CURVE_DEFAULT = ("geodesic-s2-assoc", "geodesic-s2-nonholo", "boruvka-s2", "small-sphere",
                 "halfsphere-freeboundary", "cap-freeboundary", "cap-tilted", "boruvka-cap")


def _closed_holomorphic_checks(rep, cfg, e, rng, sw):
    s, t = e.patch.sample_grid(8, cap=0.05)
    g = LocalGeometry(e.patch, s, t, order=3)
    eta = g.normal(rng.standard_normal(g.p.shape))
    sym = holomorphic_symmetry_residuals(g, eta)
    rep.add(residual("shape_symmetries", "II(X,JY) = J II(X,Y), W_{JX} = −J W_X, W_X J = J W_X",
                     max(float(np.max(v)) for v in sym.values()), cfg.tol("symmetry"), e.id,
                     {k: float(np.max(v)) for k, v in sym.items()}), sw.lap())
    rep.add(residual("torsion_normal", "P(X, η) is normal for X tangent, η normal",
                     np.max(torsion_normal_residual(g, eta)), cfg.tol("symmetry"), e.id), sw.lap())
    H = float(np.max(np.linalg.norm(g.mean_curvature(), axis=-1)))
    rep.add(residual("mean_curvature", "holomorphic curves are minimal", H, cfg.tol("mean_curvature"), e.id),
            sw.lap())
    if e.fields:
        xi = g.normal(rng.standard_normal(g.p.shape))
        rep.add(residual("ricci_equation", "Ricci equation R̄(X,Y,η,ξ) = R⊥(X,Y,η,ξ) + <[W_X, W_Y]η, ξ>",
                         np.max(ricci_equation_residual(g, e.fields[0], xi)), cfg.tol("ricci"), e.id), sw.lap())
        rep.add(residual("weingarten", "Weingarten equation <W_X η, Y> = −<II(X,Y), η>",
                         np.max(weingarten_residual(g, e.fields[0], g.e1, g.e2)), cfg.tol("symmetry"), e.id),
                sw.lap())
    worst, cons = 0.0, 0.0
    for k in range(0, len(s), max(1, len(s) // 4)):
        pt = (s[k], t[k])
        h0 = hopf_coefficients(e.patch, pt)
        h1 = hopf_coefficients(e.patch, pt, adapt_u2_frame(e.patch, pt, float(rng.uniform(0, 2 * np.pi)),
                                                           normal_seed=rng.standard_normal(7)))
        worst = max(worst, abs(h0.magnitude2 - h1.magnitude2))
        cons = max(cons, h0.consistency, h1.consistency)
    rep.add(residual("hopf_frame_independence", "|κ|² + |μ|² does not depend on the adapted U(2) frame",
                     worst, cfg.tol("hopf"), e.id, {"read_off_consistency": cons,
                                                    "magnitude2": h0.magnitude2}), sw.lap())
    if "area" in e.expect:
        A = area(e.patch, cfg.nodes)
        rep.add(residual("area", "area by Gauss–Legendre quadrature", abs(A - e.expect["area"]) / e.expect["area"],
                         cfg.tol("identity"), e.id, {"area": A}), sw.lap())


def _free_boundary_checks(rep, cfg, e, sw):
    c, rho = e.ball.center, e.ball.radius
    s, t = e.patch.edge_points("s1", 8)
    orth = [boundary_orthogonality(e.patch, c, rho, (a, b)) for a, b in zip(s, t)]
    probe = rigidity_probe(e.patch, c, rho, tol=cfg.tol("rigidity"))
    if e.control:
        rep.add(verdict("free_boundary_control_flagged", "non-orthogonal configurations are flagged",
                        probe["flagged"], probe, e.id), sw.lap())
        return
    rep.add(residual("boundary_orthogonality", "Σ meets the geodesic sphere orthogonally",
                     max(o["defect"] for o in orth), cfg.tol("orthogonality"), e.id), sw.lap())
    rep.add(residual("umbilicity", "geodesic spheres are umbilic, A = cot(ρ) Id",
                     max(o["umbilicity"] for o in orth), cfg.tol("umbilicity"), e.id,
                     {"c": orth[0]["c"], "cot_radius": 1.0 / np.tan(rho)}), sw.lap())
    phi = max(probe["max_II12_boundary"], probe["max_phi_boundary"], probe["max_phi_interior"])
    rep.add(residual("phi_vanishing", "Φ vanishes along the boundary and hence everywhere (rigidity)",
                     phi, cfg.tol("rigidity"), e.id, probe), sw.lap())
    rep.add(verdict("free_boundary_not_flagged", "orthogonal free-boundary configuration passes the probe",
                    not probe["flagged"], probe["flagged"], e.id), sw.lap())


def curve(cfg: RunConfig) -> SuiteReport:
    rep, sw, rng = SuiteReport("curve"), Stopwatch(), _rng(cfg, "curve")
    for cid in cfg.selected(CURVE_DEFAULT):
        e = catalog.get(cid)
        g = LocalGeometry(e.patch, *e.patch.sample_grid(8, cap=0.05), order=2)
        d = holomorphic_defects(g)
        holo = bool(np.max(d["j_invariance"]) < cfg.tol("identity"))
        rep.add(verdict("holomorphic_verdict", "J-invariance of tangent planes", holo == e.holomorphic,
                        holo, cid, {"max_j_invariance": float(np.max(d["j_invariance"])),
                                    "max_calibration": float(np.max(d["calibration"]))}), sw.lap())
        if not e.holomorphic and not e.totally_geodesic:
            H = float(np.max(np.linalg.norm(g.mean_curvature(), axis=-1)))
            rep.add(verdict("non_minimal_control", "a non-minimal control has nonzero mean curvature",
                            H > 100 * cfg.tol("mean_curvature"), H, cid), sw.lap())
        if e.holomorphic and not e.patch.boundary:
            _closed_holomorphic_checks(rep, cfg, e, rng, sw)
        if e.ball is not None:
            _free_boundary_checks(rep, cfg, e, sw)
    return rep


# second variation ----------------------------------------------------------------------

VARIATION_DEFAULT = ("halfsphere-lag", "boruvka-s2", "halfsphere-nonlag", "small-sphere")


def _master_oracle(rep, cfg, e, sw):
    sv = NKSecondVariation(e.patch, e.lagrangian, cfg.nodes)
    count = 0
    for f in e.fields:
        fam = VariationFamily(e.patch, f)
        parts = sv.parts(f)
        nk = sv.value(parts)
        fd = area_second_difference(fam, nodes=cfg.nodes)
        gen = second_variation_general(fam, nodes=cfg.nodes)
        scale = max(abs(fd), sv.mass(parts))
        rel = abs(nk - fd) / scale
        rep.add(residual(f"master_oracle[{f.name}]", "nearly-Kähler second variation formula vs d²Area/dε²",
                         rel, cfg.tol("master"), e.id,
                         {"nk": nk, "fd": fd, "general": gen, "general_vs_fd": abs(gen - fd) / scale,
                          "richardson": richardson_change(fam, nodes=cfg.nodes)}), sw.lap())
        count += rel < cfg.tol("master")
        s, t = e.patch.sample_grid(5, cap=0.05)
        lr = pointwise_residuals(e.patch, s, t, f)
        rep.add(residual(f"shape_ricci[{f.name}]", "|Wη|² + Ric̄(η) = −R⊥(e1,e2,η,Jη) + 2λ²|η|²",
                         np.max(lr["shape_ricci"]), cfg.tol("shape_ricci"), e.id), sw.lap())
        rep.add(residual(f"weitzenbock[{f.name}]", "|∇⊥η|² + R⊥(e1,e2,η,Jη) = ½|𝒟η|² + <P(e1,Jη), 𝒟_{e1}η> + dα_η",
                         np.max(lr["weitzenbock"]), cfg.tol("weitzenbock"), e.id), sw.lap())
        if e.lagrangian is not None:
            bterm = boundary_term_residual(fam, e.lagrangian, "s1", 64)
            rep.add(residual(f"boundary_term[{f.name}]", "boundary term <∇̄_η η, ν> = −<∇⊥_T η, Jη> on a Lagrangian",
                             np.max(bterm), cfg.tol("boundary_term"), e.id), sw.lap())
    if e.lagrangian is not None:
        rep.add(verdict("master_oracle_coverage", "at least five admissible fields agree with the oracle",
                        count >= 5, count, e.id), sw.lap())


def variation(cfg: RunConfig) -> SuiteReport:
    rep, sw = SuiteReport("variation"), Stopwatch()
    for cid in cfg.selected(VARIATION_DEFAULT):
        e = catalog.get(cid)
        if not e.holomorphic:
            try:
                second_variation_general(VariationFamily(e.patch, catalog.monomial_field("e7", (0, 0, 0),
                                                                                         np.eye(7)[6])),
                                         nodes=cfg.nodes)
                rejected, msg = False, "accepted"
            except PreconditionError as exc:
                rejected, msg = True, str(exc)
            rep.add(verdict("non_minimal_rejected", "second variation requires a minimal surface",
                            rejected, msg, cid), sw.lap())
            continue
        if e.lagrangian is not None and e.control:
            try:
                NKSecondVariation(e.patch, e.lagrangian, 16)
                rejected, msg = False, "accepted"
            except PreconditionError as exc:
                rejected, msg = True, str(exc)
            rep.add(verdict("non_lagrangian_rejected", "the formula requires a Lagrangian boundary",
                            rejected, msg, cid), sw.lap())
            worst = max(float(np.max(boundary_term_residual(VariationFamily(e.patch, f), e.lagrangian, "s1", 64,
                                                      check=False))) for f in e.fields)
            rep.add(verdict("boundary_term_control_flagged", "boundary identity fails off Lagrangian boundaries",
                            worst > cfg.tol("boundary_term"), worst, cid), sw.lap())
            continue
        if e.fields:
            _master_oracle(rep, cfg, e, sw)
    return rep


# index and Maslov ------------------------------------------------------------------------

INDEX_DEFAULT = ("halfsphere-lag",)


def _maslov_checks(rep, cfg, e, rng, sw, n=128):
    m1 = maslov.maslov_decomposition(e.patch, e.lagrangian, n)
    m2 = maslov.maslov_decomposition(e.patch, e.lagrangian, 2 * n)
    rep.add(verdict("maslov_tangent", "μ(TΣ, T∂Σ) = 2χ(Σ) = 2 on the disk", m1["tangent"] == 2, m1["tangent"],
                    e.id), sw.lap())
    rep.add(verdict("maslov_additivity", "μ(u*TS⁶, TL) = μ(TΣ, T∂Σ) + μ(NΣ, F)", bool(m1["additive"]),
                    {k: m1[k] for k in ("tangent", "normal", "total")}, e.id), sw.lap())
    stable = all(m1[k] == m2[k] for k in ("tangent", "normal", "total"))
    rep.add(verdict("maslov_refinement", "Maslov indices stable under doubling the loop sampling", stable,
                    {k: [m1[k], m2[k]] for k in ("tangent", "normal", "total")}, e.id), sw.lap())
    data = maslov.loop_data(e.patch, e.lagrangian, "normal", n)
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    H = H + H.conj().T
    H = H / np.linalg.norm(H, 2)
    U0 = scipy.linalg.expm(1j * H)
    U = np.stack([U0 @ scipy.linalg.expm(1j * 0.7 * np.sin(tk) * H) for tk in t])
    rotated = maslov.maslov_index(maslov.rotate_trivialization(data, U))
    rep.add(verdict("maslov_trivialization_homotopy", "μ(NΣ, F) unchanged under a null-homotopic change of frame",
                    rotated == maslov.maslov_index(data),
                    rotated, e.id), sw.lap())


def index(cfg: RunConfig) -> SuiteReport:
    rep, sw, rng = SuiteReport("index"), Stopwatch(), _rng(cfg, "index")
    for cid in cfg.selected(INDEX_DEFAULT):
        e = catalog.get(cid)
        if e.lagrangian is None or e.control or not e.holomorphic:
            continue
        _maslov_checks(rep, cfg, e, rng, sw)
        sv = NKSecondVariation(e.patch, e.lagrangian, cfg.index_nodes)
        counts, bases = [], []
        for d in range(cfg.index_degree + 1):
            b = admissible_basis(sv, d)
            Q, G = quadratic_form_matrix(sv, b)
            counts.append(negative_count(Q, G)[0])
            bases.append(b)
        mono = all(a <= b for a, b in zip(counts, counts[1:]))
        rep.add(verdict("index_monotone", "negative count is monotone along nested admissible bases", mono,
                        counts, cid), sw.lap())
        icfg = IndexConfig(degree=cfg.index_degree, nodes=cfg.index_nodes)
        r = verify_index_bound(e, icfg, basis=bases[-1], sv=sv)
        consistent = r.bound_satisfied and (
            (r.verdict == "bound vacuous") == (r.maslov_total <= 0)) and (
            r.verdict == "bound vacuous" or r.negative_count >= r.maslov_total)
        rep.add(verdict("index_bound", "Morse index ≥ μ(u*TS⁶, TL), vacuous when μ ≤ 0", consistent,
                        r.verdict, cid, r.to_dict(), vacuous=r.verdict == "bound vacuous"), sw.lap())
        rep.add(residual("admissibility", "basis fields are tangent to the Lagrangian along ∂Σ",
                         r.admissibility, 1e-6, cid), sw.lap())
        ker = dbar_kernel(sv, bases[-1], cfg.tol("kernel_singular"))
        rep.add(verdict("dbar_kernel_found", "𝒟 has a nontrivial kernel on admissible fields",
                        ker["dimension"] >= 1, ker["dimension"], cid,
                        {"smallest_singular_values": sorted(ker["singular_values"])[:4]}), sw.lap())
        expect = ker["expected_quotient"]
        worst = max([abs(q - expect) / abs(expect) for q in ker["quotients"]], default=np.inf)
        rep.add(residual("dbar_kernel_negativity", "on ker 𝒟, δ²A(η) = −2λ²∫|η|² < 0", worst, cfg.tol("kernel"),
                         cid, {"quotients": ker["quotients"]}), sw.lap())
        rep.add(verdict("riemann_roch", "dim ker 𝒟 ≥ rχ(Σ) + μ(NΣ, F)",
                        ker["dimension"] >= r.riemann_roch_index,
                        {"kernel": ker["dimension"], "index": r.riemann_roch_index}, cid), sw.lap())
        b = bases[-1]
        Q, G = quadratic_form_matrix(sv, b)
        tol = 1e-6 * max(float(np.max(np.abs(Q))), 1.0)
        pb = positive_subbasis(b, Q, G, tol)
        n_neg, ev = negative_count(*quadratic_form_matrix(sv, pb))
        ok, word = index_verdict(n_neg, r.maslov_total)
        rep.add(verdict("positive_basis_insufficient", "a basis without negative directions is reported "
                        "as insufficient, not as a failed bound", n_neg == 0 and ok and float(ev[0]) > 0,
                        {"negative_count": n_neg, "basis_insufficient": n_neg == 0, "verdict": word,
                         "smallest_eigenvalue": float(ev[0]), "size": len(pb)}, cid), sw.lap())
    return rep


# cone ----------------------------------------------------------------------------------

def cone_suite(cfg: RunConfig) -> SuiteReport:
    rep, sw, rng = SuiteReport("cone"), Stopwatch(), _rng(cfg, "cone")
    tf = cone.torsion_free_check(rng, samples=max(4, cfg.samples // 5))
    anchors = {"d_phi": "dφ = 0 for φ = r²dr∧ω + r³ Re Υ₀", "d_psi": "dψ = 0 for ψ = −r³dr∧Im Υ₀ + ½r⁴ω∧ω",
               "phi_primitive": "φ = d(r³ω/3)", "psi_primitive": "ψ = d(−r⁴ Im Υ₀ / 4)"}
    for k, a in anchors.items():
        rep.add(residual(k, a, tf[k], cfg.tol("cone")))
    sw.lap()
    ratios = cone.convergence_ratios(cfg.seed)
    ok = all(3.5 < ratios[k] < 4.5 for k in anchors)
    rep.add(verdict("h2_convergence", "finite-difference residuals shrink by 4 under step halving", ok,
                    {k: ratios[k] for k in anchors}, details=ratios), sw.lap())
    fa = cone.flat_agreement(rng, samples=cfg.samples // 2 or 1)
    rep.add(residual("flat_phi", "cone φ equals the flat φ₀ on R⁷ ∖ {0}", fa["phi"], cfg.tol("agreement"),
                     details={"orientation_sign": cone.orientation_sign()}), sw.lap())
    rep.add(residual("flat_psi", "cone ψ equals the flat ∗φ₀ on R⁷ ∖ {0}", fa["psi"], cfg.tol("agreement")),
            sw.lap())
    cr = cone.contraction_residuals(rng)
    rep.add(residual("contraction_omega", "ω = (∂r ⌟ φ) at r = 1", cr["omega"], cfg.tol("contraction")), sw.lap())
    rep.add(residual("contraction_upsilon", "Υ₀ = (φ − i ∂r ⌟ ψ) at r = 1", cr["upsilon0"],
                     cfg.tol("contraction")), sw.lap())
    for cid in cfg.selected(tuple(catalog.ids())):
        e = catalog.get(cid)
        v = cone.equivalence_verdict(e.patch, cfg.tol("associative"))
        both = v["associative"] == v["holomorphic"] == e.holomorphic and v["pointwise_agree"]
        rep.add(verdict("holomorphic_iff_associative", "Σ holomorphic ⇔ C(Σ) associative", both,
                        {"associative": v["associative"], "holomorphic": v["holomorphic"]}, cid, v), sw.lap())
        if e.holomorphic:
            rep.add(residual("associativity", "φ(∂r, ê1, ê2) = ±1 on the cone over a holomorphic curve",
                             v["max_associativity"], cfg.tol("associative"), cid), sw.lap())
        else:
            rep.add(verdict("associativity_control", "cones over non-holomorphic controls are not associative",
                            v["max_associativity"] > 0.1, v["max_associativity"], cid), sw.lap())
    return rep


REGISTRY = {
    "algebra": algebra,
    "nk-identities": nk_identities,
    "curve": curve,
    "variation": variation,
    "index": index,
    "cone": cone_suite,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    """Run one suite, turning unexpected library errors into a failed report."""
    try:
        return REGISTRY[name](cfg)
    except NKLabError as exc:
        rep = SuiteReport(name)
        rep.error = f"{type(exc).__name__}: {exc}"
        return rep
    except Exception:  # noqa: BLE001 - reported, not swallowed
        rep = SuiteReport(name)
        rep.error = traceback.format_exc(limit=3)
        return rep
