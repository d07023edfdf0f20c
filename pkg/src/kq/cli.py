"""Batch command line interface.

Commands read an algebra document (and usually a sequence document), run one
computation, and print a canonical JSON result on stdout.  Output is byte
identical across runs on identical inputs: keys are sorted, there are no
timestamps, and the engine version and input hashes are embedded.  Exit code
0 means success, 1 a user error (diagnostics in the JSON on stdout and a
human message on stderr), 2 an internal invariant violation.
"""

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .chain_algebra import NatSystem, homology, truncate
from .documents import (
    algebra_to_dict,
    nat_to_dict,
    parse_algebra,
    parse_sequence,
    presentation_to_dict,
)
from .errors import BudgetExceededError, EngineError, UserInputError
from .oracle_support import DEFAULT_BUDGET, EnumerationBudget
from .toda import (
    MorphismSequence,
    adams_d,
    build_chain_complex,
    oracle_bracket_set,
    toda_bracket,
    triple_indeterminacy,
)


def _sha256(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path, what):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UserInputError(f"{what} file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UserInputError(f"{what} file is not valid JSON: {exc}")


def _emit(doc, out_path=None):
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    sys.stdout.write(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)


def _violation_out(v):
    return {"axiom": v["axiom"], "witness": list(v["witness"]), "detail": v["detail"]}


def _load_algebra(args, result, require_valid=True):
    doc = _load_json(args.algebra, "algebra")
    result["inputs"]["algebra_sha256"] = _sha256(args.algebra)
    algebra, violations = parse_algebra(doc)
    if violations and require_valid:
        raise UserInputError(
            "the algebra violates its axioms",
            detail={"violations": [_violation_out(v) for v in violations]},
        )
    return algebra, violations


def _load_sequence(args, result, algebra):
    if not args.sequence:
        raise UserInputError("this command needs --sequence")
    doc = _load_json(args.sequence, "sequence")
    result["inputs"]["sequence_sha256"] = _sha256(args.sequence)
    return parse_sequence(doc, algebra)


def _bracket_payload(res, nat):
    out = {"status": res.status, "choice_log": res.choice_log}
    if res.representative is not None:
        out["representative"] = nat_to_dict(res.representative)
    if res.step is not None:
        out["failed_step"] = res.step
        out["failed_index"] = res.index
        out["certificate"] = res.certificate
    return out


def _budget(args):
    if args.budget is not None:
        return EnumerationBudget(args.budget)
    env = os.environ.get("ENGINE_BUDGET")
    if env:
        try:
            return EnumerationBudget(int(env))
        except ValueError:
            raise UserInputError(f"ENGINE_BUDGET is not an integer: {env!r}")
    return EnumerationBudget(DEFAULT_BUDGET)


def run(args):
    result = {"command": args.command, "engine_version": __version__, "inputs": {}}

    if args.command == "validate":
        algebra, violations = _load_algebra(args, result, require_valid=False)
        result["valid"] = not violations
        result["violations"] = [_violation_out(v) for v in violations]
        return result

    if args.command == "truncate":
        algebra, _ = _load_algebra(args, result)
        if args.n is None:
            raise UserInputError("truncate needs --n")
        result["algebra"] = algebra_to_dict(truncate(algebra, args.n))
        return result

    if args.command == "homology":
        algebra, _ = _load_algebra(args, result)
        if args.k is None:
            raise UserInputError("homology needs --k")
        hom = homology(algebra, args.k)
        result["k"] = args.k
        result["modules"] = presentation_to_dict(hom, algebra.r_max)
        return result

    if args.command in ("massey", "toda"):
        algebra, _ = _load_algebra(args, result)
        seq = _load_sequence(args, result, algebra)
        n = args.n if args.n is not None else algebra.n
        nat = NatSystem(algebra, n)
        res = toda_bracket(algebra, seq, n, nat=nat)
        result.update(_bracket_payload(res, nat))
        if n == 1:
            result["indeterminacy_generators"] = [
                nat_to_dict(g) for g in triple_indeterminacy(algebra, seq, nat=nat)
            ]
        return result

    if args.command == "oracle":
        algebra, _ = _load_algebra(args, result)
        seq = _load_sequence(args, result, algebra)
        n = args.n if args.n is not None else algebra.n
        nat = NatSystem(algebra, n)
        reps = oracle_bracket_set(algebra, seq, n, budget=_budget(args), nat=nat)
        result["bracket_set"] = [nat_to_dict(r) for r in reps]
        result["set_size"] = len(reps)
        return result

    if args.command == "chain-complex":
        algebra, _ = _load_algebra(args, result)
        seq = _load_sequence(args, result, algebra)
        n = args.n if args.n is not None else algebra.n
        hcc, fail = build_chain_complex(algebra, seq, n, search_budget=_budget(args))
        if hcc is None:
            result["status"] = "not_constructible"
            result["failed_step"] = fail.get("step")
            result["failed_index"] = fail.get("index")
            result["certificate"] = _jsonable(fail.get("certificate"))
        else:
            result["status"] = "defined"
            result["levels"] = sorted([list(k) for k in hcc.data])
            result["choice_log"] = hcc.choice_log
        return result

    if args.command == "adams-d":
        algebra, _ = _load_algebra(args, result)
        seq = _load_sequence(args, result, algebra)
        n = args.n if args.n is not None else algebra.n
        if seq.length != n + 2:
            raise UserInputError(
                f"adams-d needs {n + 2} maps: the resolution window then the class lift"
            )
        window = MorphismSequence.of(seq.modules[: n + 2], seq.maps[: n + 1])
        beta = seq.maps[n + 1]
        nat = NatSystem(algebra, n)
        hcc, fail = build_chain_complex(algebra, window, n, search_budget=_budget(args), nat=nat)
        if hcc is None:
            raise UserInputError(
                "the resolution window does not extend to a coherent chain complex",
                detail=_jsonable(fail),
            )
        res = adams_d(algebra, hcc, beta, n, nat=nat)
        result.update(_bracket_payload(res, nat))
        return result

    raise UserInputError(f"unknown command {args.command!r}")


def _jsonable(obj):
    if obj is None or isinstance(obj, (int, str, bool)):
        return obj
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return repr(obj)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="engine",
        description="Exact higher Toda brackets and matrix Massey products over Z/p^k.",
    )
    parser.add_argument(
        "command",
        choices=[
            "validate",
            "truncate",
            "homology",
            "massey",
            "toda",
            "chain-complex",
            "adams-d",
            "oracle",
        ],
    )
    parser.add_argument("--algebra", required=True, help="algebra document (JSON)")
    parser.add_argument("--sequence", help="sequence document (JSON)")
    parser.add_argument("--n", type=int, help="bracket order / truncation level")
    parser.add_argument("--k", type=int, help="homology level")
    parser.add_argument("--budget", type=int, help="enumeration budget (states)")
    parser.add_argument("--out", help="also write the result JSON to this file")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = run(args)
    except BudgetExceededError as exc:
        _emit({"command": args.command, "status": "error", "error": str(exc), "kind": "budget"}, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UserInputError as exc:
        _emit(
            {
                "command": args.command,
                "status": "error",
                "error": str(exc),
                "detail": _jsonable(exc.detail),
                "kind": "user",
            },
            args.out,
        )
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EngineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
