"""Worked examples for the multiplicative group, V = V_3 ⊕ V_5."""

from __future__ import annotations

from .affcat import AffineSubspace, ApproxCategory, generating_space
from .ffla import Subspace
from .reps import weight_rep
from .torus_model import build_torus_model


def _poly_str(model, v) -> str:
    terms = []
    for a, c in sorted(model.as_dict(v).items(), reverse=True):
        mono = "1" if a == 0 else ("t" if a == 1 else f"t^{a}")
        terms.append(mono if c == 1 else f"{c}" if a == 0 else f"{c}·{mono}")
    return " + ".join(terms) if terms else "0"


def gm_worked_example(p: int = 7, d: int = 5, weights=(3, 5)) -> dict:
    """S -> I_d -> Hom_d for X1 = {(1,1)} against {(2,1)} and the diagonal."""
    model = build_torus_model(d, p)
    rep = weight_rep(model, weights)
    cat = ApproxCategory(rep)
    v1 = AffineSubspace.singleton(p, [1, 1])
    cases = {"point": AffineSubspace.singleton(p, [2, 1]),
             "diagonal": AffineSubspace(p, 2, [0, 0], Subspace(p, 2, [[1, 1]]))}
    out: dict = {"p": p, "d": d, "weights": list(weights), "dim_R": model.dim, "cases": {}}
    for name, X2 in cases.items():
        S = generating_space(rep, v1, X2)
        H = cat.hom(v1, X2)
        case = {"S": [_poly_str(model, s) for s in S.basis], "dim_S": S.dim,
                "dim_I": H.ideal.dim, "dim_Hom": H.dim, "rounds": H.ideal.rounds}
        if name == "point":
            chain = {"2t^2 - 1": {2: 2, 0: -1}, "t - 4": {1: 1, 0: -4}, "31": {0: 31}}
            case["chain"] = {k: bool(H.ideal.span.contains(model.poly(c))) for k, c in chain.items()}
            case["31_is_unit"] = 31 % p != 0
        out["cases"][name] = case
    return out


def gm_report_lines(res: dict) -> list:
    lines = [f"G_m, V = V_{res['weights'][0]} ⊕ V_{res['weights'][1]}, p = {res['p']}, "
             f"d = {res['d']}, dim R_d = {res['dim_R']}"]
    for name, c in res["cases"].items():
        target = "{(2,1)}" if name == "point" else "{(x,x)}"
        lines.append(f"X1 = {{(1,1)}}, X2 = {target}")
        lines.append(f"  S(X1,X2) = span{{{', '.join(c['S'])}}}  (dim {c['dim_S']})")
        for k, ok in c.get("chain", {}).items():
            lines.append(f"  {k} in I_d: {ok}")
        if "31_is_unit" in c:
            lines.append(f"  31 invertible mod p: {c['31_is_unit']}")
        lines.append(f"  dim I_d = {c['dim_I']} after {c['rounds']} rounds, dim Hom_d = {c['dim_Hom']}")
    return lines


def gm_isomorphism_witness(p: int = 31, d: int = 5, weights=(3, 5)):
    """Verdict for {(1,1)} vs {(2,1)}; over F_31 the witness is t = 4."""
    model = build_torus_model(d, p)
    cat = ApproxCategory(weight_rep(model, weights))
    v = cat.is_isomorphic(AffineSubspace.singleton(p, [1, 1]), AffineSubspace.singleton(p, [2, 1]))
    return v, model


__all__ = ["gm_isomorphism_witness", "gm_report_lines", "gm_worked_example"]
