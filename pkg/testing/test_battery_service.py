# testing/test_battery_service.py
import pytest

from domain.errors import SpecParseError
from services import battery_service


def test_order_rows():
    row = battery_service.order_row("I1")
    assert row["units"] == "C4 (4)"
    assert row["inv"] == 2
    assert row["E2_ab_finite"] is True
    assert row["FA_E2"] is False
    assert row["FA_B2"] is True

    row = battery_service.order_row("Z")
    assert row["E2_ab"] == "C12"
    assert row["O_mod_N"] == "C2"
    assert row["GE2_ab_order"] == 4
    assert row["GRK_D2"] == "none"
    assert row["FA_B2"] is False


def test_group_rows():
    row = battery_service.group_row("S3")
    assert row["forbidden_witness"] == "S3"
    assert row["fa"] == "false"
    assert row["hfa"] is False
    row = battery_service.group_row("Q8")
    assert row["hfa"] is True and row["forbidden_witness"] == ""


def test_group_battery_table():
    df = battery_service.group_battery(["C2", "C5", "Q8"])
    assert list(df.columns) == battery_service.GROUP_COLUMNS
    assert list(df["hfa"]) == [True, False, True]
    table = battery_service.render(df)
    assert table.splitlines()[0].startswith("| group")
    assert len(table.splitlines()) == 5


def test_order_battery_table():
    df = battery_service.order_battery(["Z", "I3"])
    assert list(df.columns) == battery_service.ORDER_COLUMNS
    assert list(df["FA_E2"]) == [False, True]


def test_battery_propagates_errors():
    with pytest.raises(SpecParseError):
        battery_service.order_battery(["Iq:0"])


@pytest.mark.slow
def test_default_batteries():
    orders = battery_service.order_battery()
    assert len(orders) == len(battery_service.BATTERY_ORDERS)
    groups = battery_service.group_battery()
    assert len(groups) == len(battery_service.BATTERY_GROUPS)
    assert not groups.set_index("group").loc["SL(2,3)", "hfa"]
