# services/battery_service.py
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence

import pandas as pd

from domain.errors import AlgebraError
from services import abelianization_service, decision_service, units_service
from utils.spec_parse import parse_group_spec, parse_order_spec

from config import BATTERY_GROUPS, BATTERY_ORDERS

log = logging.getLogger(__name__)

ORDER_COLUMNS = [
    "order", "rank", "inv", "units", "E2_ab", "O_mod_N", "GE2_ab_order",
    "E2_ab_finite", "FA_E2", "FA_B2", "GRK_D2",
]
GROUP_COLUMNS = ["group", "n", "cut", "hfa", "forbidden_witness", "fa", "certificate"]


def order_row(spec: str) -> Dict[str, object]:
    order = parse_order_spec(spec)
    units = units_service.unit_group(order)
    rank = abelianization_service.rank_and_finiteness(order)
    ge2 = abelianization_service.ge2_abelianization(order)
    grk = decision_service.grk_criterion(order, "D2")
    return {
        "order": spec,
        "rank": rank.rank,
        "inv": rank.inv,
        "units": f"{units_service.identify_group(units)} ({units.size})",
        "E2_ab": rank.e2_ab.describe(),
        "O_mod_N": ge2.o_mod_n.describe(),
        "GE2_ab_order": ge2.total_order,
        "E2_ab_finite": rank.finite,
        "FA_E2": decision_service.decide_fa_e2(order),
        "FA_B2": decision_service.decide_fa_borel(order),
        "GRK_D2": "[{}, {}]".format(*grk.witness) if grk.found else "none",
    }


def group_row(spec: str) -> Dict[str, object]:
    G = parse_group_spec(spec)
    decision = decision_service.decide_hfa(G)
    profile = decision_service.fa_profile(G)
    return {
        "group": spec,
        "n": G.n,
        "cut": decision.cut,
        "hfa": decision.hfa,
        "forbidden_witness": decision.forbidden_witness or "",
        "fa": profile.fa,
        "certificate": decision.certificate,
    }


def _table(specs: Sequence[str], build, columns: List[str]) -> pd.DataFrame:
    rows = []
    for spec in specs:
        try:
            rows.append(build(spec))
        except AlgebraError as exc:
            log.warning("battery row %s failed: %s", spec, exc)
            raise
    return pd.DataFrame(rows, columns=columns) if rows else pd.DataFrame(columns=columns)


def order_battery(specs: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """One row per order: rank formula, abelianizations and FA decisions."""
    return _table(specs or BATTERY_ORDERS, order_row, ORDER_COLUMNS)


def group_battery(specs: Optional[Sequence[str]] = None) -> pd.DataFrame:
    return _table(specs or BATTERY_GROUPS, group_row, GROUP_COLUMNS)


def render(df: pd.DataFrame) -> str:
    return df.to_markdown(index=False)
