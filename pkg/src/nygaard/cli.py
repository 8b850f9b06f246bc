"""Command-line surface: subcommands, config handling, JSON envelopes,
and the fixture regression runner.

Output is canonical JSON (sorted keys); identical configs produce
byte-identical payloads regardless of --threads (enforced by tests).
Exit codes: 0 success, 2 on NotStabilized / PrecisionExhausted, 1 on
usage errors.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .complexes import Complex, eta_cohomology_law_check
from .linalg import PGroup
from .pdalg import (
    NotStabilized as PDNotStabilized,
    PDAlgebra,
    PrecisionExhausted as PDPrecisionExhausted,
    conj_graded_map_check,
    conjugate_filtration_equality_check,
    frobenius_fixed_points,
    nygaard_graded_image_check,
    phi_pth_power_check,
    span_identity_check,
)
from .qtorus import (
    build_qtorus,
    lnu_identification_check,
    q_divided_frobenius_checks,
    q_frobenius_chain_map_check,
    q_nygaard_stability_check,
    specialization_check,
)
from .syntomic import (
    BoundViolated,
    NotStabilized,
    PrecisionExhausted,
    contraction_bound_check,
    syntomic_acrys,
    syntomic_charp,
    syntomic_q,
)
from .torus import (
    PrecisionExhausted as TorusPrecisionExhausted,
    build_torus,
    conjugate_check,
    divided_frobenius_identity_check,
    frobenius_chain_map_check,
    frobenius_eta_check,
    hodge_quotient_check,
    weights_box,
)
from .witt import (
    FpSquareModel,
    QSquareModel,
    build_perfectoid_square,
    frobenius_W,
    teichmuller,
    verschiebung,
    witt,
    witt_mul,
    witt_scalar,
)
from .rings import PolyTruncFp


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    p: int = 2
    n: int = 2
    r: int = 1
    N: int = 4
    e: int = 2
    W: int = 0  # 0 means the model default
    M: int = 4
    V: int = 0  # 0 means automatic
    d: int = 1
    i: int = 1
    model: str = "charp"
    f: str = "p"
    fixture: str = "koszul_p"
    out: str = ""
    threads: int = 1

    def __post_init__(self):
        for name in ("n", "r", "N", "e", "d", "threads"):
            if getattr(self, name) < 1:
                raise UsageError("%s must be >= 1" % name)
        if not _is_prime(self.p):
            raise UsageError("p = %d is not prime" % self.p)

    def to_json(self):
        return asdict(self)


def _is_prime(p):
    if p < 2:
        return False
    t = 2
    while t * t <= p:
        if p % t == 0:
            return False
        t += 1
    return True


def _resolve_f(cfg):
    """--f accepts an integer or the tokens p, p^2, p^3, ..."""
    tok = cfg.f
    if isinstance(tok, int):
        return tok
    tok = tok.strip()
    if tok == "p":
        return cfg.p
    if tok.startswith("p^"):
        return cfg.p ** int(tok[2:])
    return int(tok)


def _pgroups_json(groups):
    return {str(k): g.to_json() for k, g in sorted(groups.items())}


# ---------------------------------------------------------------------------
# subcommands


def cmd_witt(cfg):
    rng = random.Random(0)
    R = PolyTruncFp(cfg.p, 3)
    laws = {"FV_is_p": True, "teichmuller_F": True, "projection_formula": True}
    for _ in range(25):
        w = witt(R, cfg.p, tuple(R.random(rng) for _ in range(cfg.n + 1)))
        if frobenius_W(verschiebung(w)) != witt_scalar(cfg.p, w):
            laws["FV_is_p"] = False
        a = R.random(rng)
        from .witt import _ring_pow

        if frobenius_W(teichmuller(R, cfg.p, a, cfg.n + 1)) != teichmuller(
            R, cfg.p, _ring_pow(R, a, cfg.p), cfg.n
        ):
            laws["teichmuller_F"] = False
        y = witt(R, cfg.p, tuple(R.random(rng) for _ in range(cfg.n + 2)))
        if witt_mul(verschiebung(w), y) != verschiebung(witt_mul(w, frobenius_W(y))):
            laws["projection_formula"] = False
    sq_fp = build_perfectoid_square(FpSquareModel(cfg.p, cfg.n)).check_all()
    sq_q = build_perfectoid_square(QSquareModel(cfg.p, cfg.n, cfg.N)).check_all()
    return {
        "laws": laws,
        "square_fp": sq_fp,
        "square_q": sq_q,
        "all_ok": all(laws.values()) and all(sq_fp.values()) and all(sq_q.values()),
    }


def _fixture_complex(name, p):
    if name == "koszul_p":
        return Complex({0: 1, 1: 2, 2: 1}, {0: [[p, p]], 1: [[-p], [p]]})
    if name == "mult_p":
        return Complex({0: 1, 1: 1}, {0: [[p]]})
    if name == "zero":
        return Complex({0: 1, 1: 1}, {0: [[0]]})
    if name.startswith("random"):
        seed = int(name[6:] or 0)
        rng = random.Random(seed)
        from .linalg import kernel_int, mat_mul

        degs = [0, 1, 2, 3]
        ranks = {j: rng.randint(1, 3) for j in degs}
        diffs = {}
        nxt = None
        for j in reversed(degs[:-1]):
            if nxt is None:
                D = [[rng.randint(-3, 3) for _ in range(ranks[j + 1])] for _ in range(ranks[j])]
            else:
                K = kernel_int(nxt)
                if not K:
                    D = [[0] * ranks[j + 1] for _ in range(ranks[j])]
                else:
                    R = [[rng.randint(-3, 3) for _ in range(len(K))] for _ in range(ranks[j])]
                    D = mat_mul(R, K)
            diffs[j] = D
            nxt = D
        return Complex(ranks, diffs)
    raise UsageError("unknown fixture complex %r" % name)


def cmd_eta(cfg):
    f = _resolve_f(cfg)
    if f == 0:
        raise UsageError("f must be nonzero")
    C = _fixture_complex(cfg.fixture, cfg.p)
    rep = eta_cohomology_law_check(f, C, cfg.p)
    return {
        "f": f,
        "fixture": cfg.fixture,
        "degrees": {
            str(j): {
                "eta": r["pgroup"],
                "match": r["match"],
            }
            for j, r in rep.items()
        },
        "all_ok": all(r["match"] for r in rep.values()),
    }


def _chunk(seq, k):
    if k <= 1:
        return [list(seq)]
    out = [[] for _ in range(k)]
    for t, x in enumerate(seq):
        out[t % k].append(x)
    return [c for c in out if c]


def cmd_derham(cfg):
    X = build_torus(cfg.p, cfg.d, cfg.n)
    payload = {}
    payload["chain_map"] = frobenius_chain_map_check(X, weights_box(cfg.d, min(cfg.M, 3)))
    payload["divided_frobenius"] = all(
        divided_frobenius_identity_check(X, i) for i in range(cfg.i + 1)
    )
    conj = conjugate_check(X, cfg.i, cfg.M)
    payload["conjugate_all_ok"] = conj["all_ok"]
    feta = frobenius_eta_check(X, cfg.i, cfg.M)
    payload["frobenius_eta_all_ok"] = feta["all_ok"]
    payload["hodge_quotient_ok"] = hodge_quotient_check(X, cfg.i)["ok"]
    payload["all_ok"] = all(
        payload[k] for k in ("chain_map", "divided_frobenius", "conjugate_all_ok",
                             "frobenius_eta_all_ok", "hodge_quotient_ok")
    )
    return payload


def cmd_qderham(cfg):
    Xq = build_qtorus(cfg.p, cfg.d, cfg.N)
    payload = {
        "specialization": specialization_check(Xq, M=min(cfg.M, 3)),
        "chain_map": q_frobenius_chain_map_check(Xq, M=min(cfg.M, 2)),
        "nygaard_stable": all(
            q_nygaard_stability_check(Xq, i, M=min(cfg.M, 2)) for i in range(cfg.i + 1)
        ),
        "divided_frobenius": all(q_divided_frobenius_checks(Xq, i) for i in range(cfg.i + 1)),
    }
    lnu = lnu_identification_check(Xq, i_max=cfg.i, M=min(cfg.M, 2), n_prec=cfg.n)
    payload["lnu_containment"] = lnu["containment"]
    payload["lnu_graded"] = lnu["graded"]
    payload["all_ok"] = all(
        payload[k]
        for k in ("specialization", "chain_map", "nygaard_stable", "divided_frobenius",
                  "lnu_containment", "lnu_graded")
    )
    return payload


def cmd_acrys(cfg):
    W = cfg.W if cfg.W else None
    A = PDAlgebra(cfg.p, 1, cfg.n, cfg.e, W)
    rng = random.Random(0)
    payload = {
        "conjugate_filtration_eq": conjugate_filtration_equality_check(
            PDAlgebra(cfg.p, 1, 1, cfg.e, W), nmax=min(cfg.i + 1, 2)
        )["ok"],
        "graded_map": all(
            conj_graded_map_check(PDAlgebra(cfg.p, 1, 1, cfg.e, W), nn)["ok"]
            for nn in range(cfg.i + 1)
        ),
        "phi_pth_power": phi_pth_power_check(A, rng),
        "nygaard_image": all(
            nygaard_graded_image_check(PDAlgebra(cfg.p, 1, 1, cfg.e, W), j)["ok"]
            for j in range(min(cfg.i, 2) + 1)
        ),
        "span_identity": span_identity_check(A, max(cfg.i, 1)),
    }
    fp = frobenius_fixed_points(A, cfg.i)
    payload["fixed_points"] = fp["group"].to_json()
    payload["all_ok"] = all(
        payload[k]
        for k in ("conjugate_filtration_eq", "graded_map", "phi_pth_power",
                  "nygaard_image", "span_identity")
    )
    return payload


def cmd_syntomic(cfg):
    V = cfg.V if cfg.V else None
    if cfg.model == "charp":
        res = syntomic_charp(cfg.p, cfg.d, cfg.i, cfg.r, M=cfg.M, V=V, threads=cfg.threads)
    elif cfg.model == "q":
        res = syntomic_q(cfg.p, cfg.d, cfg.i, cfg.r, N=cfg.N, M=cfg.M, V=V,
                         threads=cfg.threads)
    elif cfg.model == "acrys":
        W = cfg.W if cfg.W else None
        res = syntomic_acrys(cfg.p, cfg.i, cfg.r, e=cfg.e, W=W)
    else:
        raise UsageError("unknown model %r" % cfg.model)
    return res.to_json()


def cmd_contraction(cfg):
    return contraction_bound_check(cfg.p, cfg.i, cfg.M, N=cfg.N)


COMMANDS = {
    "witt": cmd_witt,
    "eta": cmd_eta,
    "derham": cmd_derham,
    "qderham": cmd_qderham,
    "acrys": cmd_acrys,
    "syntomic": cmd_syntomic,
}


# ---------------------------------------------------------------------------
# envelopes and fixtures


def canonical_payload(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run_command(command, cfg):
    t0 = time.time()
    payload = COMMANDS[command](cfg)
    return {
        "tool": "nygaard %s" % __version__,
        "command": command,
        "config": cfg.to_json(),
        "result": payload,
        "timing_s": round(time.time() - t0, 6),
    }


def fixture_regress(directory):
    """Recompute every fixture and byte-compare canonical payloads."""
    import os

    report = {"passed": [], "failed": [], "errors": []}
    if not os.path.isdir(directory):
        raise UsageError("no such fixture directory: %s" % directory)
    files = []
    for root, _, names in os.walk(directory):
        for name in sorted(names):
            if name.endswith(".json"):
                files.append(os.path.join(root, name))
    files.sort()
    if not files:
        report["warning"] = "no fixtures found (vacuous pass)"
        return report
    for path in files:
        try:
            with open(path) as fh:
                blob = json.load(fh)
            command = blob["command"]
            cfg = RunConfig(**blob["config"])
            payload = COMMANDS[command](cfg)
            if canonical_payload(payload) == canonical_payload(blob["expected"]):
                report["passed"].append(path)
            else:
                report["failed"].append(path)
        except (json.JSONDecodeError, KeyError, TypeError) as ex:
            report["errors"].append({"file": path, "error": str(ex)})
    return report


# ---------------------------------------------------------------------------
# argument parsing


def _load_config_file(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError("bad config line: %r" % line)
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


_INT_FIELDS = {"p", "n", "r", "N", "e", "W", "M", "V", "d", "i", "threads"}


def build_config(args):
    values = {}
    if args.config:
        for k, v in _load_config_file(args.config).items():
            values[k] = int(v) if k in _INT_FIELDS else v
    for k in list(_INT_FIELDS) + ["model", "f", "fixture", "out"]:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    return RunConfig(**values)


def make_parser():
    ap = argparse.ArgumentParser(
        prog="nygaard",
        description="Exact workbench for Witt vectors, decalage, Nygaard "
        "filtrations and syntomic complexes of tori.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=None, help="prime")
    common.add_argument("-n", type=int, default=None, help="coefficient precision")
    common.add_argument("-r", type=int, default=None, help="syntomic precision")
    common.add_argument("-N", type=int, default=None, help="(q-1)-adic truncation")
    common.add_argument("-e", type=int, default=None, help="perfection depth")
    common.add_argument("-W", type=int, default=None, help="divided-power weight cap")
    common.add_argument("-M", type=int, default=None, help="weight box radius")
    common.add_argument("-V", type=int, default=None, help="orbit window override")
    common.add_argument("-d", type=int, default=None, help="torus dimension")
    common.add_argument("-i", type=int, default=None, help="twist / filtration level")
    common.add_argument("--model", default=None, choices=["charp", "q", "acrys", "fp"])
    common.add_argument("--f", default=None, help="decalage element (integer or p, p^2, ...)")
    common.add_argument("--fixture", default=None, help="named fixture complex")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--config", default=None, help="flat key=value config file")
    common.add_argument("--write-fixture", default=None, help=argparse.SUPPRESS)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    reg = sub.add_parser("regress")
    reg.add_argument("directory")
    return ap


def main(argv=None):
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        # argparse uses exit code 2 for usage errors; the contract is 1
        return 1 if ex.code else 0
    try:
        if args.command == "regress":
            report = fixture_regress(args.directory)
            print(json.dumps(report, sort_keys=True, indent=1))
            return 0 if not report["failed"] and not report["errors"] else 1
        cfg = build_config(args)
        envelope = run_command(args.command, cfg)
        blob = json.dumps(envelope, sort_keys=True, indent=1)
        if args.out or cfg.out:
            with open(args.out or cfg.out, "w") as fh:
                fh.write(blob + "\n")
        else:
            print(blob)
        if args.write_fixture:
            with open(args.write_fixture, "w") as fh:
                json.dump(
                    {"command": args.command, "config": cfg.to_json(),
                     "expected": envelope["result"]},
                    fh, sort_keys=True, indent=1,
                )
                fh.write("\n")
        return 0
    except UsageError as ex:
        print("usage error: %s" % ex, file=sys.stderr)
        return 1
    except (NotStabilized, PrecisionExhausted, PDNotStabilized, PDPrecisionExhausted,
            TorusPrecisionExhausted, BoundViolated) as ex:
        print("not certified: %s" % ex, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
