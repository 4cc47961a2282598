import pytest

from fuzzyat import AttackTree, builtin_domain, make_discrete


@pytest.fixture
def bank_tree():
    """The worked bank example: get money = open the vault AND enter the bank."""
    return AttackTree.from_defs(
        {
            "get_money": ("AND", ("open_vault", "enter_bank")),
            "enter_bank": ("OR", ("sneak_in", "break_in")),
            "open_vault": "BAS",
            "sneak_in": "BAS",
            "break_in": "BAS",
        }
    )


@pytest.fixture
def shared_dag():
    """AND of two ORs sharing the leaf v."""
    return AttackTree.from_defs(
        {
            "root": ("AND", ("left", "right")),
            "left": ("OR", ("u", "v")),
            "right": ("OR", ("v", "w")),
            "u": "BAS",
            "v": "BAS",
            "w": "BAS",
        }
    )


@pytest.fixture
def bank_uncertain_attr():
    """Vault time is either 50 or 60; the entry steps are crisp."""
    return {
        "open_vault": make_discrete({50: 1, 60: 1}),
        "sneak_in": make_discrete({0: 1}),
        "break_in": make_discrete({5: 1}),
    }


@pytest.fixture
def min_time():
    return builtin_domain("min-time")


@pytest.fixture
def min_cost():
    return builtin_domain("min-cost")
