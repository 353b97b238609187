"""Scenario files: canonical JSON round-tripping of auction instances.

A scenario is UTF-8 JSON with exact decimal strings. Bundle keys are the
decimal rendering of the bundle mask (bit k set means good k is in the
bundle); entries that are zero may be omitted and are materialized as zero on
load. Serialization is canonical (sorted keys, minimal decimals, trailing
newline), so parse -> serialize is byte-identical on canonical files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .goods import format_mask
from .model import AuctionInstance, CandidateBox, Valuation, ZERO
from .money import DEFAULT_SCALE, MoneyFormatError, format_money, parse_money

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """A malformed or inconsistent scenario file, with player/bundle context."""


@dataclass(frozen=True)
class ScenarioDoc:
    """A parsed scenario: the instance plus its declared fixed-point scale."""

    instance: AuctionInstance
    scale: int


def _table_to_json(table, scale: int, where: str) -> dict[str, str]:
    out = {}
    for mask, value in enumerate(table):
        if value == 0:
            continue
        if (value * 10**scale).denominator != 1:
            raise ScenarioError(
                f"{where}: value {value} for bundle {mask} is not "
                f"representable at scale {scale}")
        out[str(mask)] = format_money(value, scale)
    return out


def _table_from_json(obj, m: int, scale: int, where: str) -> tuple[Fraction, ...]:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object of bundle values")
    table = [ZERO] * (1 << m)
    for key, text in obj.items():
        try:
            mask = int(key)
        except ValueError:
            raise ScenarioError(f"{where}: malformed bundle key {key!r}") from None
        if not 0 <= mask < (1 << m):
            raise ScenarioError(f"{where}: bundle key {mask} out of range for m={m}")
        try:
            value = parse_money(text, scale)
        except MoneyFormatError as exc:
            raise ScenarioError(f"{where}, bundle {mask}: {exc}") from None
        if value < 0:
            raise ScenarioError(f"{where}, bundle {mask}: negative value {text}")
        table[mask] = value
    if table[0] != 0:
        raise ScenarioError(f"{where}: the empty bundle must be worth 0")
    return tuple(table)


def scenario_to_text(instance: AuctionInstance, scale: int = DEFAULT_SCALE) -> str:
    players = []
    for i in range(instance.n):
        where = f"player {i + 1}"
        block = {
            "lo": _table_to_json(instance.boxes[i].lo.table, scale, where),
            "hi": _table_to_json(instance.boxes[i].hi.table, scale, where),
            "truth": _table_to_json(instance.truths[i].table, scale, where),
        }
        if instance.reports is not None:
            block["report"] = _table_to_json(
                instance.reports[i].table, scale, where)
        players.append(block)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "m": instance.m,
        "n": instance.n,
        "scale": scale,
        "players": players,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def scenario_from_text(text: str) -> ScenarioDoc:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {doc.get('schema_version')!r}")
    m = doc.get("m")
    n = doc.get("n")
    scale = doc.get("scale", DEFAULT_SCALE)
    if not isinstance(m, int) or m < 1:
        raise ScenarioError("m must be a positive integer")
    if not isinstance(n, int) or n < 1:
        raise ScenarioError("n must be a positive integer")
    if not isinstance(scale, int) or not 0 <= scale <= 18:
        raise ScenarioError("scale must be an integer between 0 and 18")
    players = doc.get("players")
    if not isinstance(players, list) or len(players) != n:
        raise ScenarioError(f"players must be a list of exactly n={n} blocks")

    boxes = []
    truths = []
    reports = []
    for i, block in enumerate(players):
        where = f"player {i + 1}"
        if not isinstance(block, dict):
            raise ScenarioError(f"{where}: block must be an object")
        unknown = set(block) - {"lo", "hi", "truth", "report"}
        if unknown:
            raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
        try:
            lo = Valuation(m, _table_from_json(
                block.get("lo", {}), m, scale, f"{where} lo"))
            hi = Valuation(m, _table_from_json(
                block.get("hi", {}), m, scale, f"{where} hi"))
            truth = Valuation(m, _table_from_json(
                block.get("truth", {}), m, scale, f"{where} truth"))
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"{where}: {exc}") from None
        try:
            box = CandidateBox(lo, hi)
        except ValueError as exc:
            raise ScenarioError(f"{where}: {exc}") from None
        if not box.contains(truth):
            bad = next(
                s for s in range(1 << m)
                if not lo.table[s] <= truth.table[s] <= hi.table[s])
            raise ScenarioError(
                f"{where}: truth outside candidate box at bundle "
                f"{bad} ({format_mask(bad, m)})")
        boxes.append(box)
        truths.append(truth)
        if "report" in block:
            reports.append(Valuation(m, _table_from_json(
                block["report"], m, scale, f"{where} report")))

    if reports and len(reports) != n:
        raise ScenarioError(
            "either every player block carries a report or none does")
    instance = AuctionInstance(
        m, n, tuple(boxes), tuple(truths), tuple(reports) if reports else None)
    return ScenarioDoc(instance, scale)


def save_scenario(instance: AuctionInstance, path, scale: int = DEFAULT_SCALE) -> None:
    Path(path).write_text(scenario_to_text(instance, scale), encoding="utf-8")


def read_scenario(path) -> ScenarioDoc:
    return scenario_from_text(Path(path).read_text(encoding="utf-8"))


def load_scenario(path) -> AuctionInstance:
    return read_scenario(path).instance
