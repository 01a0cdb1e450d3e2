"""Command-line interface with JSON input and output.

Every subcommand prints one JSON document (to stdout or ``--out``) with the
effective configuration echoed under ``"config"`` so a report is
reproducible from its own output.  Matrices are row-major nested lists,
complex numbers are ``[re, im]`` pairs.  Exit codes: 0 success, 1 check or
suite failure, 2 configuration error (bad arguments, unreadable files,
out-of-domain parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import algebra, gaussian, invariants, states
from .errors import CorrelatedStateError, DegeneracyError, DomainError, TruncationOverflowError
from .fock import FockSpace, GeneratorImages, casimir_report, vacuum, verify_rep
from .units import ConstantSet, UnitScales, derive_scales, hbar_of, natural_scales, newton_constant

__all__ = ["main"]


def _jsonify(obj):
    """Convert numpy containers and complex values to JSON-ready structures."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, algebra.GeneratorLabel):
        return repr(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


def _emit(payload: dict, out_path: str = None) -> None:
    text = json.dumps(_jsonify(payload), indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_alpha(text: str):
    """Parse an exact rational parameter, returning int where possible."""
    value = Fraction(text)
    if value <= 0:
        raise DomainError(f"alpha-hbar must be positive, got {text}")
    return int(value) if value.denominator == 1 else value


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _complex_vector(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def _state_images(meta: dict):
    """Rebuild the operator images a state file was created with."""
    space = FockSpace(int(meta["cutoff"]))
    scales = natural_scales()
    if "lambda_x" in meta:
        lx, lp = float(meta["lambda_x"]), float(meta["lambda_p"])
        scales = UnitScales(lambda_t=lx, lambda_x=lx, lambda_p=lp,
                            lambda_e=lp, lambda_a=1.0 / lx)
    alpha = _parse_alpha(str(meta.get("alpha_hbar", "1")))
    return GeneratorImages(space, scales, alpha_hbar=alpha)


def _load_state(path: str):
    meta = _load_json(path)
    images = _state_images(meta)
    amps = _complex_vector(meta["amplitudes"])
    return images, states.StateVector(amps, images.space)


def _cmd_scales(args) -> int:
    consts = ConstantSet(b=args.b, c=args.c, hbar=args.hbar,
                         alpha_hbar=args.alpha_hbar, alpha_g=args.alpha_g)
    scales = derive_scales(consts)
    payload = {
        "config": vars(consts).copy(),
        "scales": scales.as_dict(),
        "hbar_check": hbar_of(scales, consts.alpha_hbar),
        "newton_constant": newton_constant(consts),
    }
    _emit(payload, args.out)
    return 0


def _cmd_check_algebra(args) -> int:
    alpha = _parse_alpha(args.alpha_hbar)
    basis = algebra.extended_basis()
    violations = algebra.jacobi_report(basis, alpha_hbar=alpha)
    tensor = algebra.tensor_form_report(alpha_hbar=alpha)
    cases = ("I", "II") if args.contract_case == "both" else (args.contract_case,)
    b_values = tuple(int(b) for b in args.b_values.split(","))
    contraction = {}
    for case in cases:
        slopes = algebra.contraction_slopes(case, b_values=b_values, alpha_hbar=alpha)
        contraction[case] = {
            "b_values": list(slopes["b_values"]),
            "deviations": [float(d) for d in slopes["deviations"]],
            "slopes": [float(s) for s in slopes["slopes"]],
        }
    central_ok = all(not chk["violations"] for chk in tensor["central"].values())
    ok = not violations and all(
        not fam["violations"] for fam in tensor["families"].values()
    ) and central_ok and all(
        abs(s + 1.0) < 1e-9 for c in contraction.values() for s in c["slopes"]
    )
    payload = {
        "config": {"alpha_hbar": str(alpha), "contract_case": args.contract_case,
                   "b_values": list(b_values)},
        "jacobi": {"triples_checked": len(basis) ** 3, "violations": len(violations)},
        "tensor_forms": {
            name: {"checked": fam["checked"], "violations": len(fam["violations"]),
                   "reference_match": fam["reference_match"]}
            for name, fam in tensor["families"].items()
        },
        "central_term": {name: {"checked": chk["checked"], "violations": len(chk["violations"])}
                         for name, chk in tensor["central"].items()},
        "contraction": contraction,
        "passed": ok,
    }
    _emit(payload, args.out)
    return 0 if ok else 1


def _cmd_verify_rep(args) -> int:
    alpha = _parse_alpha(args.alpha_hbar)
    space = FockSpace(args.cutoff)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
    rep = verify_rep(images)
    cas = casimir_report(images)
    ok = (rep["max_residual"] < 1e-12 and rep["hermiticity_max"] < 1e-12
          and rep["sp8_max_residual"] < 1e-10
          and all(v < 1e-10 for v in cas["casimir_norms"].values())
          and cas["kappa_residual"] < 1e-10)
    payload = {
        "config": {"cutoff": args.cutoff, "alpha_hbar": str(alpha)},
        "representation": rep,
        "casimir": cas,
        "passed": ok,
    }
    _emit(payload, args.out)
    return 0 if ok else 1


def _cmd_state(args) -> int:
    alpha = _parse_alpha(args.alpha_hbar)
    space = FockSpace(args.cutoff)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
    quadratic = np.zeros((8, 8))
    displacement = np.zeros(4, dtype=complex)
    if args.phi:
        quadratic = np.array(_load_json(args.phi), dtype=float)
    if args.zeta:
        displacement = _complex_vector(_load_json(args.zeta))
    params = states.SqueezeParameters(quadratic, displacement)
    psi = states.squeezed_state(images, params)
    payload = {
        "config": {"cutoff": args.cutoff, "alpha_hbar": str(alpha),
                   "phi": args.phi, "zeta": args.zeta},
        "cutoff": args.cutoff,
        "alpha_hbar": str(alpha),
        "lambda_x": images.scales.lambda_x,
        "lambda_p": images.scales.lambda_p,
        "amplitudes": [[a.real, a.imag] for a in psi.amplitudes],
        "boundary_weight": psi.boundary_weight(),
    }
    _emit(payload, args.out)
    return 0


def _covariance_payload(images, state) -> dict:
    cov = states.covariance_matrix(images, state)
    return {
        "mean_x": cov.mean_x,
        "mean_p": cov.mean_p,
        "sigma": cov.sigma,
        "C": cov.C,
        "hbar": cov.hbar,
        "commutation_defect": cov.commutation_defect(),
        "physicality_min_eigenvalue": cov.physicality_min_eigenvalue(),
    }


def _cmd_covariance(args) -> int:
    images, state = _load_state(args.state)
    payload = {"config": {"state": args.state}}
    payload.update(_covariance_payload(images, state))
    _emit(payload, args.out)
    return 0


def _cmd_sr_check(args) -> int:
    images, state = _load_state(args.state)
    cov = states.covariance_matrix(images, state)
    result = states.sr_check(cov)
    payload = {"config": {"state": args.state}}
    payload.update(result)
    _emit(payload, args.out)
    return 0 if result["ok"] else 1


def _cmd_williamson(args) -> int:
    sigma = np.array(_load_json(args.sigma), dtype=float)
    form = gaussian.SymplecticForm(hbar=args.hbar)
    result = gaussian.williamson(sigma, form)
    payload = {
        "config": {"sigma": args.sigma, "hbar": args.hbar},
        "S": result.S,
        "D": result.diagonal,
        "nus": result.nu,
        "symplectic_defect": gaussian.symplectic_defect(result.S, form),
    }
    _emit(payload, args.out)
    return 0


_GROUP_ALIASES = {"wh": "weyl_heisenberg"}


def _cmd_sweep(args) -> int:
    group = _GROUP_ALIASES.get(args.group, args.group)
    cfg = invariants.SweepConfig(group=group, samples=args.samples, seed=args.seed,
                                 parameter_scale=args.scale, cutoff=args.cutoff,
                                 tolerance=args.tolerance)
    alpha = _parse_alpha(args.alpha_hbar)
    space = FockSpace(cfg.cutoff)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
    if args.state:
        _, base = _load_state(args.state)
        if base.space.cutoff != cfg.cutoff:
            raise DomainError("state file cutoff does not match --cutoff")
    else:
        base = states.StateVector(vacuum(space), space)
    report = invariants.invariance_sweep(images, base, cfg)
    payload = {
        "config": {"group": group, "samples": cfg.samples, "seed": cfg.seed,
                   "scale": cfg.parameter_scale, "cutoff": cfg.cutoff,
                   "tolerance": cfg.tolerance, "state": args.state,
                   "alpha_hbar": str(alpha)},
        "base_det": report.base_det,
        "sample_dets": report.sample_dets,
        "max_rel_deviation": report.max_rel_deviation,
        "sigma_max_dev": report.sigma_max_dev,
        "leakage_max": report.leakage_max,
        "excluded": report.excluded,
        "samples_used": report.samples_used,
        "passed": report.passed,
    }
    _emit(payload, args.out)
    return 0 if report.passed else 1


def _cmd_spectrum(args) -> int:
    alpha = _parse_alpha(args.alpha_hbar)
    space = FockSpace(args.cutoff)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
    report = invariants.born_green_spectrum(images, margin=args.margin)
    payload = {"config": {"cutoff": args.cutoff, "alpha_hbar": str(alpha),
                          "margin": args.margin}}
    payload.update(report)
    _emit(payload, args.out)
    ok = (report["diagonality"] < 1e-10 and report["spacing_max_err"] < 1e-10
          and report["degeneracy_match"])
    return 0 if ok else 1


def _cmd_reciprocity(args) -> int:
    data = _load_json(args.cov)
    cov = states.CovarianceData(
        mean_x=np.array(data["mean_x"], dtype=float),
        mean_p=np.array(data["mean_p"], dtype=float),
        sigma=np.array(data["sigma"], dtype=float),
        C=np.array(data["C"], dtype=float),
        hbar=float(data["hbar"]),
    )
    mapped = invariants.reciprocity_map(cov)
    four = mapped
    for _ in range(3):
        four = invariants.reciprocity_map(four)
    roundtrip = max(float(np.max(np.abs(four.sigma - cov.sigma))),
                    float(np.max(np.abs(four.means - cov.means))))
    payload = {
        "config": {"cov": args.cov},
        "mean_x": mapped.mean_x,
        "mean_p": mapped.mean_p,
        "sigma": mapped.sigma,
        "C": mapped.C,
        "hbar": mapped.hbar,
        "det_change": float(np.linalg.det(mapped.sigma) - np.linalg.det(cov.sigma)),
        "fourth_power_roundtrip": roundtrip,
    }
    _emit(payload, args.out)
    return 0


def _suite(name, results, fn):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    results[name] = {"passed": bool(ok), "seconds": round(time.perf_counter() - start, 3),
                     **detail}
    return ok


def _cmd_verify_all(args) -> int:
    alpha = _parse_alpha(args.alpha_hbar)
    tol_override = args.tolerance
    sweep_tol = tol_override if tol_override is not None else 1e-7
    oracle_tol = tol_override if tol_override is not None else 1e-6
    results = {}
    all_ok = True

    def units_suite():
        consts = ConstantSet(alpha_hbar=float(alpha))
        scales = derive_scales(consts)
        errs = {
            "hbar": abs(hbar_of(scales, consts.alpha_hbar) - consts.hbar),
            "energy": abs(scales.lambda_e - scales.lambda_p * consts.c),
            "length": abs(scales.lambda_x - consts.c * scales.lambda_t),
        }
        return max(errs.values()) < 1e-12, {"residuals": errs}

    def algebra_suite():
        basis = algebra.extended_basis()
        violations = algebra.jacobi_report(basis, alpha_hbar=alpha)
        tensor = algebra.tensor_form_report(alpha_hbar=alpha)
        slopes = {case: algebra.contraction_slopes(case, alpha_hbar=alpha)["slopes"]
                  for case in ("I", "II")}
        tensor_ok = all(not f["violations"] for f in tensor["families"].values()) \
            and all(not c["violations"] for c in tensor["central"].values())
        slope_ok = all(abs(s + 1.0) < 1e-9 for ss in slopes.values() for s in ss)
        detail = {
            "jacobi_violations": len(violations),
            "tensor_violations": 0 if tensor_ok else 1,
            "contraction_slopes": {k: [float(s) for s in v] for k, v in slopes.items()},
        }
        return (not violations) and tensor_ok and slope_ok, detail

    def fock_suite():
        space = FockSpace(args.cutoff)
        images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
        rep = verify_rep(images)
        ok = rep["max_residual"] < 1e-12 and rep["hermiticity_max"] < 1e-12 \
            and rep["sp8_max_residual"] < 1e-10
        return ok, {"max_residual": rep["max_residual"],
                    "hermiticity_max": rep["hermiticity_max"],
                    "sp8_max_residual": rep["sp8_max_residual"]}

    def casimir_suite():
        space = FockSpace(args.cutoff)
        images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
        cas = casimir_report(images)
        ok = all(v < 1e-10 for v in cas["casimir_norms"].values()) and cas["kappa_residual"] < 1e-10
        return ok, {"casimir_norms": cas["casimir_norms"],
                    "kappa_fitted": cas["kappa_fitted"],
                    "kappa_residual": cas["kappa_residual"]}

    def gaussian_suite():
        rng = np.random.default_rng(args.seed)
        form = gaussian.SymplecticForm()
        worst_sym = worst_diag = worst_det = 0.0
        for _ in range(100):
            sigma = gaussian.random_covariance(rng)
            res = gaussian.williamson(sigma, form)
            worst_sym = max(worst_sym, gaussian.symplectic_defect(res.S, form))
            D = res.S @ sigma @ res.S.T
            worst_diag = max(worst_diag, float(np.max(np.abs(D - np.diag(np.diag(D))))))
            det_ref = float(np.prod(res.nu ** 2))
            worst_det = max(worst_det, abs(np.linalg.det(sigma) - det_ref) / det_ref)
        ok = worst_sym < 1e-10 and worst_diag < 1e-9 and worst_det < 1e-8
        return ok, {"symplectic_defect": worst_sym, "diagonality": worst_diag,
                    "det_vs_nu": worst_det}

    def states_suite():
        space = FockSpace(args.cutoff)
        images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.oracle_sets):
            A = gaussian.random_quadratic(rng, norm=0.2)
            zeta = 0.08 * (rng.standard_normal(4) + 1j * rng.standard_normal(4))
            params = states.SqueezeParameters(A, zeta)
            psi = states.squeezed_state(images, params)
            _, sigma_pred, means_pred = states.predicted_gaussian(images, params)
            cov = states.covariance_matrix(images, psi)
            worst = max(worst, float(np.max(np.abs(cov.sigma - sigma_pred))),
                        float(np.max(np.abs(cov.means - means_pred))))
        return worst < oracle_tol, {"max_oracle_deviation": worst,
                                    "sets": args.oracle_sets}

    def invariants_suite():
        # The determinant-invariance property is stated at cutoff 8; running
        # the sweep in a smaller box would measure truncation, not the claim.
        sweep_cutoff = max(args.cutoff, 8)
        space = FockSpace(sweep_cutoff)
        images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
        base = states.StateVector(vacuum(space), space)
        detail = {"cutoff": sweep_cutoff}
        ok = True
        for group in ("u31", "weyl_heisenberg", "sp8"):
            cfg = invariants.SweepConfig(group=group, samples=args.samples, seed=args.seed,
                                         parameter_scale=0.2, cutoff=sweep_cutoff,
                                         tolerance=sweep_tol)
            rep = invariants.invariance_sweep(images, base, cfg)
            detail[group] = {"max_rel_deviation": rep.max_rel_deviation,
                             "excluded": rep.excluded}
            ok = ok and rep.passed
        return ok, detail

    def spectrum_suite():
        space = FockSpace(args.cutoff)
        images = GeneratorImages(space, natural_scales(), alpha_hbar=alpha)
        bg = invariants.born_green_spectrum(images)
        ok = (bg["diagonality"] < 1e-10 and bg["spacing_max_err"] < 1e-10
              and bg["degeneracy_match"])
        return ok, {"diagonality": bg["diagonality"],
                    "spacing_max_err": bg["spacing_max_err"],
                    "degeneracy_match": bg["degeneracy_match"]}

    for name, fn in (
        ("units", units_suite),
        ("algebra", algebra_suite),
        ("fock", fock_suite),
        ("casimir", casimir_suite),
        ("gaussian", gaussian_suite),
        ("states", states_suite),
        ("invariants", invariants_suite),
        ("spectrum", spectrum_suite),
    ):
        all_ok = _suite(name, results, fn) and all_ok

    payload = {
        "config": {"cutoff": args.cutoff, "seed": args.seed, "samples": args.samples,
                   "oracle_sets": args.oracle_sets, "alpha_hbar": str(alpha),
                   "tolerance": tol_override},
        "suites": results,
        "passed": all_ok,
        "failing": [k for k, v in results.items() if not v["passed"]],
    }
    _emit(payload, args.out)
    return 0 if all_ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quaplectic",
        description="Verification toolkit for the reciprocity-invariant oscillator algebra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, cutoff_default=6):
        p.add_argument("--cutoff", type=int, default=cutoff_default,
                       help="per-mode occupation cutoff")
        p.add_argument("--seed", type=int, default=42, help="PRNG seed")
        p.add_argument("--alpha-hbar", default="1",
                       help="exact rational quadrature normalisation")
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("scales", help="derive unit scales from constants")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--alpha-hbar", type=float, default=1.0, dest="alpha_hbar")
    p.add_argument("--alpha-g", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_scales)

    p = sub.add_parser("check-algebra", help="exact bracket, hermiticity and contraction checks")
    p.add_argument("--contract-case", choices=("I", "II", "both"), default="both")
    p.add_argument("--b-values", default="10,100,1000")
    p.add_argument("--alpha-hbar", default="1")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_check_algebra)

    p = sub.add_parser("verify-rep", help="representation-fidelity residual report")
    add_common(p)
    p.set_defaults(fn=_cmd_verify_rep)

    p = sub.add_parser("state", help="build a squeezed state and save it as JSON")
    add_common(p)
    p.add_argument("--phi", default=None, help="JSON file with the 8x8 quadratic form")
    p.add_argument("--zeta", default=None, help="JSON file with 4 complex displacement amplitudes")
    p.set_defaults(fn=_cmd_state)

    p = sub.add_parser("covariance", help="measure the covariance of a saved state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_covariance)

    p = sub.add_parser("sr-check", help="determinant uncertainty check for a saved state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_sr_check)

    p = sub.add_parser("williamson", help="symplectic diagonalization of a covariance matrix")
    p.add_argument("--sigma", required=True, help="JSON file with the 8x8 covariance")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_williamson)

    p = sub.add_parser("sweep", help="determinant-invariance sweep over a transformation group")
    p.add_argument("--group", required=True,
                   choices=("u31", "wh", "weyl_heisenberg", "sp8", "reciprocity"))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--scale", type=float, default=0.2)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--state", default=None, help="optional base state file (default vacuum)")
    add_common(p, cutoff_default=8)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("spectrum", help="indefinite oscillator spectrum with degeneracies")
    add_common(p)
    p.add_argument("--margin", type=int, default=2)
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("reciprocity", help="apply the position-momentum exchange to covariance data")
    p.add_argument("--cov", required=True, help="JSON covariance file (covariance subcommand output)")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_reciprocity)

    p = sub.add_parser("verify-all", help="run every verification suite and aggregate")
    add_common(p)
    p.add_argument("--samples", type=int, default=25, help="sweep samples per group")
    p.add_argument("--oracle-sets", type=int, default=10, help="state-oracle parameter sets")
    p.add_argument("--tolerance", type=float, default=None,
                   help="override sweep and oracle tolerances")
    p.set_defaults(fn=_cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, CorrelatedStateError, ValueError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2
    except (TruncationOverflowError, DegeneracyError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
