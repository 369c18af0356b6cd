"""``kqfunc`` command line.

Subcommands: family, expand, pair, verify, gp-even.  Global flags may be
given before or after the subcommand.  Results of the deterministic
subcommands are cached on disk, keyed by a hash of the request.

Exit status: 0 success, 1 verification or membership failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
import warnings

from .expand import BASES, G_SIDE_BASES, FormalGPPoly, MembershipError, expand_in_basis, gp_even_to_odd_tables
from .finvar import FinitePoly, specialize
from .kqfam import FAMILIES, G_SIDE, NotInGGammaWarning, family
from .pairing import pair
from .psym import PSeries
from .verify import SUITES, RunConfig, run_suite

SCHEMA_VERSION = "kqfunc-cache-1"
CACHE_ENV = "KQFUNC_CACHE_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_GLOBAL_DEFAULTS = {
    "degree": 10,
    "vars": 4,
    "z_order": 12,
    "format": "json",
    "cache_dir": None,
    "no_cache": False,
}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# output and cache

def dumps(obj) -> str:
    """The one JSON rendering used for stdout and the cache."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def default_cache_dir() -> str:
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "kqfunc")


def cache_key(request: dict) -> str:
    blob = json.dumps({"schema": SCHEMA_VERSION, **request}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """Rendered outputs stored one file per key; writes are atomic renames."""

    def __init__(self, directory: str | None):
        self.directory = directory

    def path(self, key: str) -> str:
        return os.path.join(self.directory, key[:2], key + ".out")

    def get(self, key: str) -> str | None:
        if not self.directory:
            return None
        try:
            with open(self.path(key), encoding="utf-8") as fh:
                return fh.read()
        except OSError:
            return None

    def put(self, key: str, text: str) -> None:
        if not self.directory:
            return
        target = self.path(key)
        folder = os.path.dirname(target)
        try:
            os.makedirs(folder, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".out")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except OSError as exc:
            # an unwritable cache must not break the computation
            print(f"warning: could not write cache entry: {exc}", file=sys.stderr)


# ---------------------------------------------------------------------------
# target grammar

_TAGGED = re.compile(r"^(ovqG|ovqg|pG|pg|qG|qg|GQ|gp)(-?\d+)$")
_SUFFIXED = re.compile(r"^(ovq|p|q)(\d+)([Gg]?)$")


def parse_factor(token: str):
    """``(tag, n)`` for one factor; tag ``'p'`` is a plain power sum."""
    m = _TAGGED.match(token)
    if m:
        return m.group(1), int(m.group(2))
    m = _SUFFIXED.match(token)
    if m:
        stem, n, side = m.group(1), int(m.group(2)), m.group(3)
        if not side:
            if stem != "p":
                raise UsageError(f"factor {token!r} needs a G or g suffix")
            return "p", n
        return stem + side, n
    raise UsageError(f"cannot parse factor {token!r}; use e.g. GQ3, q1G, ovq2g or p2")


def parse_target(text: str):
    tokens = [t.strip() for t in text.split("*")]
    if not tokens or any(not t for t in tokens):
        raise UsageError(f"empty factor in target {text!r}")
    return [parse_factor(t) for t in tokens]


def build_target(text: str, D: int) -> tuple[PSeries, bool]:
    """Multiply the parsed factors; returns ``(product, exact)``.

    If every factor is an exact polynomial (g-side members or plain power
    sums) the product is exact at its natural degree; otherwise it is
    truncated at ``D``.
    """
    parts = []
    for tag, n in parse_target(text):
        if tag == "p":
            if n < 1:
                raise UsageError("power sums are indexed from 1")
            parts.append((PSeries.p(n, n), True))
            continue
        try:
            value = family(tag, n, D)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        parts.append((value, tag not in G_SIDE))
    if all(exact for _, exact in parts):
        degree = sum(p.degree for p, _ in parts)
    else:
        degree = D
    acc = PSeries.one(degree)
    for p, exact in parts:
        acc = acc * (p.with_degree(degree) if exact else p)
    return acc, all(exact for _, exact in parts)


# ---------------------------------------------------------------------------
# commands

def cmd_family(args) -> tuple[int, object, str]:
    if args.tag not in FAMILIES:
        raise UsageError(f"unknown family {args.tag!r}")
    try:
        value = family(args.tag, args.n, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.vars_given:
        poly = specialize(value, args.vars)
        if args.tag not in G_SIDE:
            # g-side members are polynomials, so the specialization is exact
            poly = FinitePoly(poly.nvars, poly.terms, None, check=False)
        payload = {"family": args.tag, "n": args.n, **poly.to_json()}
        return EXIT_OK, payload, poly.to_text()
    return EXIT_OK, {"family": args.tag, "n": args.n, **value.to_json()}, value.to_text()


def cmd_expand(args):
    if args.basis not in BASES:
        raise UsageError(f"unknown basis {args.basis!r}; choose from {', '.join(BASES)}")
    target, exact = build_target(args.target, args.degree)
    if args.basis in G_SIDE_BASES:
        D = args.degree
        # an exact target can be embedded at any degree
        target = target.with_degree(D) if exact else target
    else:
        if not exact:
            raise UsageError(f"basis {args.basis} needs an exact (g-side or power-sum) target")
        D = target.top_degree() or 0
    e = expand_in_basis(target, args.basis, D)
    return EXIT_OK, e.to_json(), e.to_text()


def cmd_pair(args):
    g, g_exact = build_target(args.g, args.degree)
    if not g_exact:
        raise UsageError("the second argument of pair must be an exact g-side target")
    need = g.top_degree() or 0
    f, f_exact = build_target(args.f, max(args.degree, need))
    if f_exact:
        f = f.with_degree(max(args.degree, need))
    res = pair(f, g)
    return EXIT_OK, res.to_json(), res.value.to_text()


def cmd_gp_even(args):
    n_max = args.n_max if args.n_max is not None else args.degree
    if n_max < 2:
        raise UsageError("--n-max must be at least 2")
    t = gp_even_to_odd_tables(n_max)
    rows = []
    lines = []
    for n in sorted(t.gp_even):
        poly: FormalGPPoly = t.gp_even[n]
        rows.append({"index": n, "formula": poly.to_json(), "text": poly.to_text()})
        lines.append(f"gp{n} = {poly.to_text()}")
    return EXIT_OK, {"n_max": n_max, "gp_even": rows}, "\n".join(lines)


def cmd_verify(args):
    cfg = RunConfig(args.degree, args.vars, args.z_order)
    report = run_suite(args.suite, cfg)
    payload = report.to_json()
    if args.figure_dir:
        from .plotting import write_timing_figure

        os.makedirs(args.figure_dir, exist_ok=True)
        stem = os.path.join(args.figure_dir, f"verify-{args.suite}")
        with open(stem + ".json", "w", encoding="utf-8") as fh:
            fh.write(dumps(payload))
        write_timing_figure(report, stem + ".png")
    return (EXIT_OK if report.passed else EXIT_FAIL), payload, report.to_text()


COMMANDS = {
    "family": cmd_family,
    "expand": cmd_expand,
    "pair": cmd_pair,
    "gp-even": cmd_gp_even,
    "verify": cmd_verify,
}
CACHED = ("family", "expand", "pair", "gp-even")


# ---------------------------------------------------------------------------
# argument parsing

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _global_options() -> argparse.ArgumentParser:
    # defaults are suppressed so a flag given after the subcommand does not
    # get overwritten by the top-level default
    g = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    g.add_argument("--degree", "-D", type=_positive, default=s, help="truncation degree D (default 10)")
    g.add_argument("--vars", "-N", type=_positive, default=s, help="number of variables N (default 4)")
    g.add_argument("--z-order", "-M", dest="z_order", type=_positive, default=s,
                   help="z-series order M (default 12)")
    g.add_argument("--format", choices=("json", "text"), default=s, help="output format (default json)")
    g.add_argument("--cache-dir", default=s,
                   help=f"cache directory (default ${CACHE_ENV} or ~/.cache/kqfunc)")
    g.add_argument("--no-cache", action="store_true", default=s, help="neither read nor write the cache")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="kqfunc",
        description="Exact computations with K-theoretic Q-functions and their dual family.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("family", parents=[common], help="emit one family member")
    p.add_argument("--tag", required=True, help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("--n", type=int, required=True, help="index (GQ accepts n <= 0)")

    p = sub.add_parser("expand", parents=[common], help="expand a target in a basis")
    p.add_argument("--target", required=True, help="product of factors such as GQ3*q1G or p2")
    p.add_argument("--basis", required=True, help=f"one of {', '.join(BASES)}")

    p = sub.add_parser("pair", parents=[common], help="bilinear pairing <f, g>")
    p.add_argument("--f", required=True, help="G-side target, e.g. GQ3")
    p.add_argument("--g", required=True, help="g-side target, e.g. gp3")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--figure-dir", default=None,
                   help="also write verify-<suite>.json and a timing chart verify-<suite>.png here")

    p = sub.add_parser("gp-even", parents=[common], help="gp_2n as polynomials in odd gp's")
    p.add_argument("--n-max", type=_positive, default=None, help="largest index (default: --degree)")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.vars_given = hasattr(args, "vars")
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    return args


def _request(args) -> dict:
    fields = {
        "family": ("tag", "n", "degree") + (("vars",) if args.vars_given else ()),
        "expand": ("target", "basis", "degree"),
        "pair": ("f", "g", "degree"),
        "gp-even": ("n_max", "degree"),
    }[args.command]
    req = {"command": args.command, "format": args.format, "vars_given": args.vars_given}
    req.update({k: getattr(args, k) for k in fields})
    return req


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    cache = ResultCache(None if args.no_cache else (args.cache_dir or default_cache_dir()))
    key = cache_key(_request(args)) if args.command in CACHED else None
    if key is not None:
        hit = cache.get(key)
        if hit is not None:
            sys.stdout.write(hit)
            return EXIT_OK

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NotInGGammaWarning)
            status, payload, text = COMMANDS[args.command](args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except UsageError as exc:
        print(f"kqfunc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MembershipError as exc:
        lead = exc.leading_term()
        if lead is not None:
            lam, c = lead
            print(f"kqfunc: membership failure: {exc}\n  residual leading term: ({c.to_text()}) at {list(lam)}",
                  file=sys.stderr)
        else:
            print(f"kqfunc: membership failure: {exc}", file=sys.stderr)
        return EXIT_FAIL

    out = dumps(payload) if args.format == "json" else text + "\n"
    sys.stdout.write(out)
    if key is not None and status == EXIT_OK:
        cache.put(key, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
