# cli.py
import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from config import JSON_INDENT, LOG_LEVEL, validate_config
from domain.errors import AlgebraError, SpecParseError
from domain.models import FiniteAbelianInvariants
from domain.orders import OrderStruct
from domain.words import ReductionStep
from services import (
    abelianization_service,
    battery_service,
    decision_service,
    elementary_service,
    euclid_service,
    group_service,
    lattice_service,
    maps_service,
    units_service,
    words_service,
)
from utils.json_utils import to_jsonable
from utils.log_utils import configure_logging
from utils.spec_parse import parse_descriptor, parse_element, parse_group_spec, parse_matrix, parse_order_spec

log = logging.getLogger(__name__)

Emit = Callable[[str], None]


# ──────────────────────────────────────────────
# Models
# ──────────────────────────────────────────────
class CommandRequest(BaseModel):
    command: str
    action: str
    order: Optional[str] = None
    basis: Optional[str] = None
    group: Optional[str] = None
    word: Optional[str] = None
    matrix: Optional[str] = None
    a: Optional[str] = None
    b: Optional[str] = None
    side: str = Field("left", pattern="^(left|right)$")
    mode: str = Field("D2", pattern="^(D2|DE2)$")
    algebra: Optional[str] = None
    n: Optional[int] = Field(None, ge=1)
    samples: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = Field(None, ge=0)
    size: Optional[int] = Field(None, ge=1)
    max_length: Optional[int] = Field(None, ge=1)
    specs: List[str] = Field(default_factory=list)
    assert_no_type_ii: bool = False
    json_output: bool = False
    trace: bool = False


class ErrorResp(BaseModel):
    error: str
    kind: str


# ──────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────
def _order(req: CommandRequest) -> OrderStruct:
    if not req.order:
        raise SpecParseError("--order is required for this command")
    return parse_order_spec(req.order, req.basis)


def _group(req: CommandRequest):
    if not req.group:
        raise SpecParseError("--group is required for this command")
    return parse_group_spec(req.group)


def _required(value: Optional[str], flag: str) -> str:
    if value is None:
        raise SpecParseError(f"{flag} is required for this command")
    return value


def _invariants(inv: FiniteAbelianInvariants) -> Dict[str, object]:
    return {"invariants": list(inv.torsion), "free_rank": inv.free_rank}


def _pair(order: OrderStruct, pair) -> List[str]:
    return [order.format(x) for x in pair]


def _step_line(order: OrderStruct, step: ReductionStep) -> Dict[str, object]:
    return {
        "rule": step.rule,
        "before": [order.format(t) for t in step.before],
        "after": [order.format(t) for t in step.after],
        "m": step.m,
        "h": step.h,
        "m_after": step.m_after,
        "h_after": step.h_after,
        "diag": _pair(order, step.diag) if step.diag else None,
        "source": step.source,
    }


# ──────────────────────────────────────────────
# order ...
# ──────────────────────────────────────────────
def order_info(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    return {
        "order": order.label,
        "algebra": order.descriptor.spec,
        "rank": order.rank,
        "basis": [str(b) for b in order.basis],
        "traces": list(order.traces),
        "key": lattice_service.order_key(order),
    }


def order_units(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    units = units_service.unit_group(order)
    return {
        "order": order.label,
        "structure": units_service.identify_group(units),
        "size": units.size,
        "elements": [order.format(u) for u in units.elements],
        "generators": [order.format(u) for u in units_service.unit_generators(units)],
        "center": units_service.center_size(units),
        "element_orders": units_service.element_orders(units),
        "abelianization": _invariants(units_service.unit_abelianization(units)),
    }


def order_inv(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    return {"order": order.label, "rank": order.rank, "inv": units_service.inv_of_order(order)}


def order_span(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    units = units_service.unit_group(order)
    return {
        "order": order.label,
        "rank": order.rank,
        "unit_span_rank": units_service.rational_span(order, units.elements),
    }


# ──────────────────────────────────────────────
# ab ...
# ──────────────────────────────────────────────
def ab_e2(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return _invariants(abelianization_service.e2_abelianization(_order(req)))


def ab_ge2(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    report = abelianization_service.ge2_abelianization(_order(req))
    return {
        "o_mod_n": _invariants(report.o_mod_n),
        "u_ab": _invariants(report.u_ab),
        "ge2_mod_e2": report.u_ab.describe(),
        "total_order": report.total_order,
        "collapsed": report.collapsed,
        "certificate": report.certificate,
    }


def ab_rank(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    report = abelianization_service.rank_and_finiteness(_order(req))
    return {
        "rank": report.rank,
        "inv": report.inv,
        "e2_ab": _invariants(report.e2_ab),
        "finite": report.finite,
        "conditions": report.conditions,
        "matched_builtin": report.matched_builtin,
    }


def ab_m(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    report = abelianization_service.m_subgroup(order)
    return {
        "generators": {
            "type1": len(report.generators_type1),
            "type2": len(report.generators_type2),
            "type3": len(report.generators_type3),
            "type4": len(report.generators_type4),
        },
        "columns": [order.format(c) for c in report.columns],
        "loop_graph": report.loop_graph_stats,
    }


def ab_diag(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return abelianization_service.diagonal_e2_check(_order(req))


def ab_maps(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    word = words_service.parse_word(order, _required(req.word, "--word"))
    values = maps_service.abelianization_maps(order, word)
    return {"phi": order.format(values.phi), "psi": order.format(values.psi), "tau": order.format(values.tau)}


# ──────────────────────────────────────────────
# rel ...
# ──────────────────────────────────────────────
def rel_verify(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    report = words_service.verify_relation_suite(_order(req), req.samples, req.seed)
    return {"samples": report.samples, "seed": report.seed, "checked": report.checked}


def rel_alpha(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    report = words_service.alpha_relations(_order(req))
    return {"counts": report.counts, "verified": report.verified}


def rel_reduce(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    word = words_service.parse_word(order, _required(req.word, "--word"))
    on_step = None
    if req.trace:
        on_step = lambda step: emit(json.dumps(_step_line(order, step)))
    trace = words_service.reduce_relation(order, word, on_step=on_step)
    return {
        "relation_value": _pair(order, trace.relation_value),
        "steps": len(trace.steps),
        "descents": len(trace.descent_steps),
        "terminated": trace.terminated,
    }


def rel_corpus(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    corpus = words_service.relation_corpus(order, req.size, req.max_length, req.seed)
    steps = descents = 0
    for word in corpus:
        trace = words_service.reduce_relation(order, word)
        steps += len(trace.steps)
        descents += len(trace.descent_steps)
    return {
        "words": len(corpus),
        "longest": max((len(w) for w in corpus), default=0),
        "steps": steps,
        "descents": descents,
    }


def rel_elementary(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    n = req.n or 3
    return {"n": n, "checked": elementary_service.elementary_commutator_check(_order(req), n, req.samples, req.seed)}


# ──────────────────────────────────────────────
# mat ...
# ──────────────────────────────────────────────
def mat_decompose(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    if req.matrix is not None:
        m = parse_matrix(order, req.matrix)
    else:
        m = words_service.eval_word(order, words_service.parse_word(order, _required(req.word, "--matrix or --word")))
    word = euclid_service.ge2_decompose(order, m)
    return {"word": words_service.format_word(order, word), "letters": len(word)}


def mat_divide(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    order = _order(req)
    a = parse_element(order, _required(req.a, "--a"))
    b = parse_element(order, _required(req.b, "--b"))
    q, r = euclid_service.euclid_divide(order, a, b, req.side)
    return {"q": order.format(q), "r": order.format(r), "norm_r": str(order.norm(r)), "norm_b": str(order.norm(b))}


# ──────────────────────────────────────────────
# decide ...
# ──────────────────────────────────────────────
def decide_e2_fa(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return {"fa": decision_service.decide_fa_e2(_order(req))}


def decide_e2_hfa(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return {"hfa": decision_service.decide_hfa_e2(_order(req))}


def decide_borel_fa(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return {"fa": decision_service.decide_fa_borel(_order(req))}


def decide_grk(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    result = decision_service.grk_criterion(_order(req), req.mode)
    return {
        "mode": result.mode,
        "witness": list(result.witness) if result.found else "none",
        "charpoly_factors": list(result.charpoly_factors),
        "candidates_checked": result.candidates_checked,
    }


def decide_exceptional(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    descriptor = parse_descriptor(_required(req.algebra, "--algebra"))
    if req.n is None:
        raise SpecParseError("--n is required for this command")
    result = decision_service.exceptional_type(descriptor, req.n)
    return to_jsonable(result)


# ──────────────────────────────────────────────
# group ...
# ──────────────────────────────────────────────
def group_build(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return group_service.describe(_group(req))


def group_cut(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    G = _group(req)
    return {"group": G.label, "cut": group_service.is_cut(G), "criterion": "g^j conjugate to g or g^-1 for j coprime to ord(g)"}


def group_hfa(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return decision_service.decide_hfa(_group(req)).as_labels()


def group_odd(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    report = decision_service.decide_odd_order(_group(req), req.assert_no_type_ii)
    return {"order": report.order, "asserted_no_type_ii": report.asserted_no_type_ii, **report.as_labels()}


def group_components(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return to_jsonable(decision_service.component_predicates(_group(req)))


def group_fa(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return to_jsonable(decision_service.fa_profile(_group(req)))


def group_span(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    return {"span": decision_service.cut_division_span(_group(req)) or "none"}


# ──────────────────────────────────────────────
# battery ...
# ──────────────────────────────────────────────
def battery_orders(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    df = battery_service.order_battery(req.specs or None)
    return {"rows": df} if req.json_output else {"table": battery_service.render(df)}


def battery_groups(req: CommandRequest, emit: Emit) -> Dict[str, object]:
    df = battery_service.group_battery(req.specs or None)
    return {"rows": df} if req.json_output else {"table": battery_service.render(df)}


HANDLERS: Dict[Tuple[str, str], Callable[[CommandRequest, Emit], Dict[str, object]]] = {
    ("order", "info"): order_info,
    ("order", "units"): order_units,
    ("order", "inv"): order_inv,
    ("order", "span"): order_span,
    ("ab", "e2"): ab_e2,
    ("ab", "ge2"): ab_ge2,
    ("ab", "rank"): ab_rank,
    ("ab", "m"): ab_m,
    ("ab", "diag"): ab_diag,
    ("ab", "maps"): ab_maps,
    ("rel", "verify"): rel_verify,
    ("rel", "alpha"): rel_alpha,
    ("rel", "reduce"): rel_reduce,
    ("rel", "corpus"): rel_corpus,
    ("rel", "elementary"): rel_elementary,
    ("mat", "decompose"): mat_decompose,
    ("mat", "divide"): mat_divide,
    ("decide", "e2-fa"): decide_e2_fa,
    ("decide", "e2-hfa"): decide_e2_hfa,
    ("decide", "borel-fa"): decide_borel_fa,
    ("decide", "grk"): decide_grk,
    ("decide", "exceptional"): decide_exceptional,
    ("group", "build"): group_build,
    ("group", "cut"): group_cut,
    ("group", "hfa"): group_hfa,
    ("group", "odd"): group_odd,
    ("group", "components"): group_components,
    ("group", "fa"): group_fa,
    ("group", "span"): group_span,
    ("battery", "orders"): battery_orders,
    ("battery", "groups"): battery_groups,
}


# ──────────────────────────────────────────────
# Entry points
# ──────────────────────────────────────────────
def run(req: CommandRequest, emit: Emit = print) -> Tuple[int, Dict[str, object]]:
    """Dispatch one request; returns (exit code, JSON-able report)."""
    handler = HANDLERS.get((req.command, req.action))
    if handler is None:
        err = ErrorResp(error=f"unknown command: {req.command} {req.action}", kind="parse")
        return 1, err.model_dump()
    try:
        return 0, to_jsonable(handler(req, emit))
    except AlgebraError as exc:
        log.debug("%s %s failed: %s", req.command, req.action, exc)
        return exc.exit_code, ErrorResp(error=str(exc), kind=exc.kind).model_dump()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebra", description="Elementary matrices over orders and unit groups of group rings.")
    parser.add_argument("command", choices=sorted({c for c, _ in HANDLERS}))
    parser.add_argument("action")
    parser.add_argument("--order")
    parser.add_argument("--basis", help="JSON basis for quat:/Qi: orders")
    parser.add_argument("--group")
    parser.add_argument("--word")
    parser.add_argument("--matrix", help="JSON [[a, b], [c, d]]")
    parser.add_argument("--a")
    parser.add_argument("--b")
    parser.add_argument("--side", default="left")
    parser.add_argument("--mode", default="D2")
    parser.add_argument("--algebra")
    parser.add_argument("--n", type=int, help="matrix size (exceptional) or dimension (elementary)")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--size", type=int)
    parser.add_argument("--max-length", type=int)
    parser.add_argument("--specs", nargs="*", default=[])
    parser.add_argument("--assert-no-type-ii", action="store_true")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--trace", action="store_true")
    return parser


def _render(report: Dict[str, object]) -> str:
    if "table" in report:
        return str(report["table"])
    return "\n".join(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in report.items())


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        validate_config()
    except RuntimeError as exc:
        print(json.dumps({"error": str(exc), "kind": "config"}), file=sys.stderr)
        return 2
    configure_logging(LOG_LEVEL)

    try:
        req = CommandRequest(
            command=args.command,
            action=args.action,
            order=args.order,
            basis=args.basis,
            group=args.group,
            word=args.word,
            matrix=args.matrix,
            a=args.a,
            b=args.b,
            side=args.side,
            mode=args.mode,
            algebra=args.algebra,
            n=args.n,
            samples=args.samples,
            seed=args.seed,
            size=args.size,
            max_length=args.max_length,
            specs=args.specs,
            assert_no_type_ii=args.assert_no_type_ii,
            json_output=args.json,
            trace=args.trace,
        )
    except ValidationError as exc:
        first = exc.errors()[0]
        print(json.dumps({"error": f"--{first['loc'][0]}: {first['msg']}", "kind": "parse"}), file=sys.stderr)
        return 1

    code, report = run(req)
    if args.json or code:
        out = sys.stdout if code == 0 else sys.stderr
        print(json.dumps(report, indent=JSON_INDENT), file=out)
    else:
        print(_render(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
