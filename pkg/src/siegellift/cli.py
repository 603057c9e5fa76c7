"""Command-line front end: every computation, reproducible output.

Exit codes: 0 success, 1 usage, 2 domain error, 3 capability error,
4 internal consistency error.  JSON output is canonical (sorted keys),
so re-parsing and re-rendering is byte-identical.
"""

import argparse
import json
import sys
import time
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

from ._backend import backend_name, default_threads
from .errors import CapabilityError, ConsistencyError, DomainError
from .lattice import (GenusWithWeights, automorphism_order,
                      representation_count, short_vectors, theta_coefficients)
from .lift import (corollary_ratio_check, ikeda_coefficient,
                   parse_eigenform_text, parse_plusform_text, siegel_rhs)
from .quadform import (HalfIntegralForm, load_bundled_genus,
                       load_bundled_lattice, parse_genus_text,
                       parse_lattice_text, bundled_lattice_names)
from .siegelseries import (F_p_poly, gamma_p, psi_eval, psi_poly,
                           siegel_series_layers)
from .sqrtring import SqrtVal


def _resolve_lattice(text):
    if text.startswith("@"):
        return parse_lattice_text(Path(text[1:]).read_text())
    return load_bundled_lattice(text)


def _resolve_xi(text):
    if text.startswith("gram:"):
        return _resolve_lattice(text[5:]).half_gram_form()
    if text.startswith("@"):
        return parse_lattice_text(Path(text[1:]).read_text()).half_gram_form()
    return HalfIntegralForm.from_string(text)


def _resolve_genus(text):
    if text.startswith("@"):
        path = Path(text[1:])

        def loader(name):
            cand = path.parent / f"{name}.lat"
            if cand.exists():
                return parse_lattice_text(cand.read_text())
            return load_bundled_lattice(name)

        name, lats = parse_genus_text(path.read_text(), loader)
        return GenusWithWeights(name or path.stem, lats)
    name, lats = load_bundled_genus(text)
    return GenusWithWeights(name or text, lats)


def _resolve_eigenform(text):
    if text == "delta":
        from importlib import resources
        text = "@" + str(resources.files("siegellift.data") / "delta.eig")
    if text.startswith("@"):
        return parse_eigenform_text(Path(text[1:]).read_text())
    raise DomainError(f"unknown eigenform {text!r} (use 'delta' or @path)")


def _resolve_plusform(text):
    if text == "delta":
        from importlib import resources
        text = "@" + str(resources.files("siegellift.data") / "plusform_k6.plus")
    if text.startswith("@"):
        return parse_plusform_text(Path(text[1:]).read_text())
    raise DomainError(f"unknown plus form {text!r} (use 'delta' or @path)")


def _resolve_class_function(text, genus):
    """Inline 'name=val,name=val' or 'uniform:val'."""
    if text.startswith("uniform:"):
        v = Fraction(text[len("uniform:"):])
        return {lat.name: v for lat in genus.lattices}
    out = {}
    for part in text.split(","):
        name, _, val = part.partition("=")
        if not _:
            raise DomainError(f"bad class-function entry {part!r}")
        out[name.strip()] = Fraction(val.strip())
    return out


def _decimal_str(v, digits=50):
    getcontext().prec = digits + 10
    if isinstance(v, Fraction):
        d = Decimal(v.numerator) / Decimal(v.denominator)
    else:
        d = Decimal(0)
        for rad, coef in sorted(v._c.items()):
            d += (Decimal(coef.numerator) / Decimal(coef.denominator)
                  * Decimal(rad).sqrt())
    return str(+d)


def _render_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, SqrtVal):
        if v.is_rational():
            return str(v.to_fraction())
        return {"exact": str(v), "decimal": _decimal_str(v)}
    if isinstance(v, dict):
        return {str(k): _render_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_render_value(x) for x in v]
    return str(v)


def _emit(args, command, inputs, result, t0):
    payload = {
        "command": command,
        "inputs": {k: _render_value(v) for k, v in inputs.items()},
        "result": _render_value(result),
        "timing": round(time.perf_counter() - t0, 6),
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        def lines(prefix, val):
            if isinstance(val, dict):
                for k in val:
                    yield from lines(f"{prefix}{k}: ", val[k])
            elif isinstance(val, list):
                yield f"{prefix}{' '.join(str(x) for x in val)}"
            else:
                yield f"{prefix}{val}"

        for ln in lines("", {"result": payload["result"]}):
            print(ln)
    return 0


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: SIEGELLIFT_THREADS or 1)")
    ap = argparse.ArgumentParser(
        prog="siegellift",
        description="exact local series, lattice counts, theta averages, "
                    "and lift coefficient checks")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        return p

    p = add("siegel-series", help="layer coefficients of the local series")
    p.add_argument("--xi", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)

    p = add("fpoly", help="cofactor polynomial F of the local series")
    p.add_argument("--xi", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)

    p = add("ftilde", help="symmetric normalization of F at X + 1/X")
    p.add_argument("--xi", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--lam", default=None, help="rational value of X + 1/X")
    p.add_argument("--eigenform", default=None)

    p = add("psi", help="square-class polynomial in X + 1/X")
    p.add_argument("--eta", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--lam", default=None)
    p.add_argument("--eigenform", default=None)

    p = add("shortvec", help="counts of short vectors by norm")
    p.add_argument("--lattice", required=True)
    p.add_argument("--bound", type=int, required=True)

    p = add("repcount", help="representation number of a form by a lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument("--xi", required=True)

    p = add("autord", help="order of the isometry group")
    p.add_argument("--lattice", required=True)

    p = add("theta", help="batch of representation numbers")
    p.add_argument("--lattice", required=True)
    p.add_argument("--xi", action="append", default=None)
    p.add_argument("--bound", type=int, default=None,
                   help="degree-1 batch for all indices up to bound/2")

    p = add("ravg", help="weighted genus average of representation numbers")
    p.add_argument("--genus", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--xi", required=True)
    p.add_argument("--self-gram-shortcut", action="store_true")

    p = add("siegel-check", help="genus average against the density formula")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--xi", required=True)
    p.add_argument("--genus", required=True)

    p = add("ikeda", help="predicted lift coefficient of a form")
    p.add_argument("--xi", required=True)
    p.add_argument("--eigenform", required=True)
    p.add_argument("--plusform", required=True)

    p = add("cor101-check", help="ratio consistency: theta averages vs lift")
    p.add_argument("--genus", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--eigenform", required=True)
    p.add_argument("--plusform", required=True)
    p.add_argument("--xi", action="append", required=True)
    p.add_argument("--no-self-gram-shortcut", action="store_true")

    p = add("lattices", help="list bundled lattice names")
    return ap


def _lam_from(args):
    if args.lam is not None:
        lam = SqrtVal.of(Fraction(args.lam))
        return lam
    if args.eigenform is not None:
        sat = _resolve_eigenform(args.eigenform)
        return sat.lam(args.prime)
    return None


def _dispatch(args):
    t0 = time.perf_counter()
    threads = args.threads if args.threads is not None else default_threads()
    cmd = args.command

    if cmd == "siegel-series":
        xi = _resolve_xi(args.xi)
        layers = siegel_series_layers(xi, args.prime, args.depth,
                                      threads=threads)
        return _emit(args, cmd, {"xi": str(xi), "prime": args.prime},
                     {"layers": list(layers)}, t0)

    if cmd == "fpoly":
        xi = _resolve_xi(args.xi)
        data = F_p_poly(xi, args.prime, e_max=args.depth, threads=threads)
        return _emit(args, cmd, {"xi": str(xi), "prime": args.prime},
                     {"F": list(data.F_coeffs), "f": data.f,
                      "delta": data.gamma_delta,
                      "layers": list(data.layer_coeffs),
                      "gamma": gamma_p(data.m, data.gamma_delta, data.prime)},
                     t0)

    if cmd == "ftilde":
        from .siegelseries import F_tilde_eval
        xi = _resolve_xi(args.xi)
        lam = _lam_from(args)
        if lam is None:
            raise DomainError("ftilde needs --lam or --eigenform")
        val = F_tilde_eval(xi, args.prime, lam)
        return _emit(args, cmd, {"xi": str(xi), "prime": args.prime,
                                 "lam": lam}, val, t0)

    if cmd == "psi":
        eta = Fraction(args.eta)
        coeffs = psi_poly(eta, args.prime)
        result = {"coefficients": coeffs if coeffs else [SqrtVal.of(0)]}
        lam = _lam_from(args)
        if lam is not None:
            result["value"] = psi_eval(eta, args.prime, lam)
        elif not coeffs:
            result = {"coefficients": [SqrtVal.of(0)], "value": SqrtVal.of(0)}
        return _emit(args, cmd, {"eta": str(eta), "prime": args.prime},
                     result, t0)

    if cmd == "shortvec":
        lat = _resolve_lattice(args.lattice)
        counts = short_vectors(lat, args.bound, threads=threads)
        return _emit(args, cmd, {"lattice": lat.name, "bound": args.bound},
                     counts, t0)

    if cmd == "repcount":
        lat = _resolve_lattice(args.lattice)
        xi = _resolve_xi(args.xi)
        n = representation_count(lat, xi, threads=threads)
        return _emit(args, cmd, {"lattice": lat.name, "xi": str(xi)}, n, t0)

    if cmd == "autord":
        lat = _resolve_lattice(args.lattice)
        n = automorphism_order(lat, threads=threads)
        return _emit(args, cmd, {"lattice": lat.name}, n, t0)

    if cmd == "theta":
        lat = _resolve_lattice(args.lattice)
        if args.xi:
            xis = [_resolve_xi(t) for t in args.xi]
        elif args.bound is not None:
            xis = [HalfIntegralForm.from_rational([[n]])
                   for n in range(0, args.bound // 2 + 1)]
        else:
            raise DomainError("theta needs --xi or --bound")
        degree = xis[0].size
        vals = theta_coefficients(lat, degree, xis, threads=threads)
        return _emit(args, cmd, {"lattice": lat.name, "degree": degree},
                     {str(x): v for x, v in vals.items()}, t0)

    if cmd == "ravg":
        genus = _resolve_genus(args.genus)
        f = _resolve_class_function(args.f, genus)
        xi = _resolve_xi(args.xi)
        val = genus.weighted_average(f, xi, threads=threads,
                                     self_gram_shortcut=args.self_gram_shortcut)
        return _emit(args, cmd, {"genus": genus.name, "xi": str(xi)}, val, t0)

    if cmd == "siegel-check":
        genus = _resolve_genus(args.genus)
        xi = _resolve_xi(args.xi)
        if xi.size != 2 * args.k:
            raise DomainError(f"--k {args.k} does not match form size {xi.size}")
        ones = {lat.name: Fraction(1) for lat in genus.lattices}
        lhs = genus.weighted_average(ones, xi, threads=threads) / genus.mass()
        rhs = siegel_rhs(xi, genus_rank=genus.rank, threads=threads)
        ok = lhs == rhs
        line = f"LHS {lhs} == RHS {rhs}: {'PASS' if ok else 'FAIL'}"
        if args.format == "text":
            print(line)
            return 0 if ok else 4
        _emit(args, cmd, {"genus": genus.name, "xi": str(xi), "k": args.k},
              {"lhs": lhs, "rhs": rhs, "verdict": "PASS" if ok else "FAIL"},
              t0)
        return 0 if ok else 4

    if cmd == "ikeda":
        xi = _resolve_xi(args.xi)
        sat = _resolve_eigenform(args.eigenform)
        plus = _resolve_plusform(args.plusform)
        res = ikeda_coefficient(xi, sat, plus)
        return _emit(args, cmd, {"xi": str(xi)},
                     {"value": res.value, "in_support": res.in_support}, t0)

    if cmd == "cor101-check":
        genus = _resolve_genus(args.genus)
        f = _resolve_class_function(args.f, genus)
        sat = _resolve_eigenform(args.eigenform)
        plus = _resolve_plusform(args.plusform)
        xis = [_resolve_xi(t) for t in args.xi]
        report = corollary_ratio_check(
            genus, f, sat, plus, xis, threads=threads,
            self_gram_shortcut=not args.no_self_gram_shortcut)
        result = {
            "entries": [{"xi": str(x), "R": R, "A": A}
                        for x, R, A in report.entries],
            "consistent": report.consistent,
            "failures": [list(p) for p in report.failures],
        }
        _emit(args, cmd, {"genus": genus.name}, result, t0)
        return 0 if report.consistent else 4

    if cmd == "lattices":
        return _emit(args, cmd, {}, bundled_lattice_names(), t0)

    raise DomainError(f"unknown command {cmd!r}")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            return 1
        return 0
    try:
        return _dispatch(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
