"""Bundled JSON fixtures, keyed by figure/example number of origin."""

from __future__ import annotations

import json
from importlib import resources

from .channel import Lmuc, MCode, lmuc_from_json, mcode_from_json
from .gf import FieldSpec
from .netgraph import Network, NetworkCode, network_from_json


def fixture_names() -> list[str]:
    root = resources.files("lmuc") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_json(name: str) -> dict:
    path = resources.files("lmuc") / "fixtures" / f"{name}.json"
    return json.loads(path.read_text())


def load_network(name: str) -> tuple[Network, NetworkCode, FieldSpec]:
    return network_from_json(load_json(name))


def load_lmuc(name: str) -> Lmuc:
    return lmuc_from_json(load_json(name))


def load_mcode(name: str) -> MCode:
    return mcode_from_json(load_json(name))


NETWORK_FIXTURES = (
    "fig1_network",
    "fig2_network_f1",
    "fig2_network_f2",
    "fig3_network_ex8a",
    "fig3_network_ex8b",
    "fig4_network",
    "fig5_network",
)

LMUC_FIXTURES = (
    "ex4_lmuc_l1",
    "ex4_lmuc_l2",
    "ex8_lmuc",
    "eee1_lmuc_gf2",
    "eee2_lmuc_gf2",
    "eee2_lmuc_gf3",
)

CODE_FIXTURES = (
    "eee1_code_rate21_gf2",
    "eee1_code_rate12_gf2",
    "eee2_code_gf3",
    "eee2_code_gf2_ambiguous",
)
