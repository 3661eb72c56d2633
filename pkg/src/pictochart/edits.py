"""Typed modifications, propagation modes, and the undoable edit log.

``apply_edit`` is the single mutation gateway: it resolves the target set
for the requested mode, validates the action against the node kinds,
copies exactly the affected nodes, applies the action, and returns a new
tree plus a log entry holding full pre/post images of those nodes.  Undo
and redo restore snapshots; they never recompute pattern layouts.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import patterns
from .assets import stub_icon
from .colors import as_rgba
from .errors import InvalidAction, NothingToRedo, NothingToUndo
from .overlay import DesignPattern, PictorialAsset
from .tree import ChartTree, Node, NodeKind, STRUCTURAL_KINDS

AssetSource = Callable[[str, int, int], PictorialAsset]


class EditMode(str, Enum):
    ONE_TO_ONE = "one-to-one"
    ONE_TO_GROUP = "one-to-group"
    ONE_TO_ALL = "one-to-all"


@dataclass(frozen=True)
class StyleDelta:
    """Absolute style overrides; None fields are left untouched."""

    fill_color: tuple[int, int, int, int] | None = None
    stroke_color: tuple[int, int, int, int] | None = None
    font_size: float | None = None
    font_color: tuple[int, int, int, int] | None = None
    opacity: float | None = None
    position_offset: tuple[int, int] | None = None

    def touches_text(self) -> bool:
        return self.font_size is not None or self.font_color is not None

    def to_json(self) -> dict:
        out: dict = {}
        for key in ("fill_color", "stroke_color", "font_color"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val)
        if self.font_size is not None:
            out["font_size"] = self.font_size
        if self.opacity is not None:
            out["opacity"] = self.opacity
        if self.position_offset is not None:
            out["position_offset"] = list(self.position_offset)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "StyleDelta":
        def color(key):
            return as_rgba(data[key]) if data.get(key) is not None else None

        return cls(
            fill_color=color("fill_color"),
            stroke_color=color("stroke_color"),
            font_size=data.get("font_size"),
            font_color=color("font_color"),
            opacity=data.get("opacity"),
            position_offset=tuple(data["position_offset"]) if data.get("position_offset") else None,
        )


@dataclass(frozen=True)
class ApplyPattern:
    pattern: DesignPattern
    asset_desc: str


@dataclass(frozen=True)
class SetStyle:
    delta: StyleDelta


@dataclass(frozen=True)
class ReplaceBackground:
    asset_desc: str


@dataclass(frozen=True)
class SetOpacity:
    value: float


@dataclass(frozen=True)
class MoveText:
    dx: int
    dy: int


@dataclass(frozen=True)
class ReplaceTickLabels:
    # may contain "{label}"; otherwise the label is appended per tick
    asset_desc: str


Action = ApplyPattern | SetStyle | ReplaceBackground | SetOpacity | MoveText | ReplaceTickLabels


@dataclass(frozen=True)
class Modification:
    target: str
    mode: EditMode
    action: Action

    def to_json(self) -> dict:
        action = self.action
        if isinstance(action, ApplyPattern):
            payload = {"type": "apply_pattern", "pattern": action.pattern.to_json(),
                       "asset_desc": action.asset_desc}
        elif isinstance(action, SetStyle):
            payload = {"type": "set_style", "delta": action.delta.to_json()}
        elif isinstance(action, ReplaceBackground):
            payload = {"type": "replace_background", "asset_desc": action.asset_desc}
        elif isinstance(action, SetOpacity):
            payload = {"type": "set_opacity", "value": action.value}
        elif isinstance(action, MoveText):
            payload = {"type": "move_text", "dx": action.dx, "dy": action.dy}
        elif isinstance(action, ReplaceTickLabels):
            payload = {"type": "replace_tick_labels", "asset_desc": action.asset_desc}
        else:  # pragma: no cover
            raise TypeError(f"unknown action {action!r}")
        return {"target": self.target, "mode": self.mode.value, "action": payload}

    @classmethod
    def from_json(cls, data: dict) -> "Modification":
        raw = data["action"]
        kind = raw["type"]
        if kind == "apply_pattern":
            action: Action = ApplyPattern(DesignPattern.from_json(raw["pattern"]), raw["asset_desc"])
        elif kind == "set_style":
            action = SetStyle(StyleDelta.from_json(raw.get("delta", {})))
        elif kind == "replace_background":
            action = ReplaceBackground(raw["asset_desc"])
        elif kind == "set_opacity":
            action = SetOpacity(raw["value"])
        elif kind == "move_text":
            action = MoveText(raw["dx"], raw["dy"])
        elif kind == "replace_tick_labels":
            action = ReplaceTickLabels(raw["asset_desc"])
        else:
            raise InvalidAction(f"unknown action type {kind!r}")
        return cls(data["target"], EditMode(data["mode"]), action)


def resolve_targets(tree: ChartTree, target: str, mode: EditMode) -> list[str]:
    """Expand a selection to the node set the mode propagates to.

    Selecting a structural node (root or a branch) is inherently collective:
    all element descendants are returned for every mode.
    """
    node = tree.node(target)
    if node.kind in STRUCTURAL_KINDS:
        members = {
            nid for nid in tree.descendants(target)
            if tree.nodes[nid].kind not in STRUCTURAL_KINDS
        }
        return [nid for nid in tree.document_order() if nid in members]
    if mode == EditMode.ONE_TO_ONE:
        return [target]
    if mode == EditMode.ONE_TO_GROUP:
        return [
            nid for nid in tree.document_order()
            if tree.nodes[nid].kind == node.kind and tree.nodes[nid].group_key == node.group_key
        ]
    return [nid for nid in tree.document_order() if tree.nodes[nid].kind == node.kind]


@dataclass(frozen=True)
class LogEntry:
    modification: Modification
    pre: dict[str, Node]
    post: dict[str, Node]
    added_assets: dict[str, PictorialAsset]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class EditLog:
    entries: tuple[LogEntry, ...] = ()
    cursor: int = 0

    def record(self, entry: LogEntry) -> "EditLog":
        # edits after an undo discard the redo tail
        return EditLog(self.entries[: self.cursor] + (entry,), self.cursor + 1)

    @property
    def can_undo(self) -> bool:
        return self.cursor > 0

    @property
    def can_redo(self) -> bool:
        return self.cursor < len(self.entries)


def _clone_for_edit(tree: ChartTree, affected: list[str]) -> ChartTree:
    nodes = dict(tree.nodes)
    for nid in affected:
        nodes[nid] = copy.deepcopy(nodes[nid])
    return ChartTree(tree.chart_type, tree.canvas, tree.root, nodes,
                     tree.legend_links, dict(tree.assets))


def _expand_pattern_targets(tree: ChartTree, targets: list[str]) -> list[str]:
    """ApplyPattern on a branch or root reaches its graphical elements."""
    out = [t for t in targets if tree.nodes[t].kind == NodeKind.GRAPHICAL_ELEMENT]
    if not out:
        raise InvalidAction("pattern application needs at least one graphical element target")
    return out


def _asset_box(tree: ChartTree, node: Node) -> tuple[int, int]:
    if node.region is not None:
        _, _, w, h = node.region.bbox
        return max(w, 8), max(h, 8)
    return tree.canvas


def apply_edit(tree: ChartTree, modification: Modification,
               asset_source: AssetSource = stub_icon) -> tuple[ChartTree, LogEntry]:
    """Apply one modification; only resolved targets change."""
    targets = resolve_targets(tree, modification.target, modification.mode)
    action = modification.action

    if isinstance(action, ApplyPattern):
        targets = _expand_pattern_targets(tree, targets)
    elif isinstance(action, ReplaceTickLabels):
        targets = [t for t in targets if tree.nodes[t].kind in (NodeKind.X_AXIS, NodeKind.Y_AXIS)]
        if not targets:
            raise InvalidAction("tick replacement targets an axis node")
        targets = [modification.target] if modification.target in targets else targets[:1]
        # the axis children carry the overlays
        targets = targets + [
            cid for cid in tree.nodes[targets[0]].children
            if tree.nodes[cid].kind == NodeKind.TICK_LABEL
        ]
    elif isinstance(action, ReplaceBackground):
        bg = tree.first_of_kind(NodeKind.BACKGROUND)
        if bg is None:
            raise InvalidAction("tree has no background node")
        targets = [bg.id]
    elif isinstance(action, (SetStyle, MoveText)):
        if isinstance(action, MoveText) or action.delta.touches_text():
            for nid in targets:
                if not tree.nodes[nid].text:
                    raise InvalidAction(
                        f"text action on {nid} ({tree.nodes[nid].kind.value}) without text"
                    )
    elif isinstance(action, SetOpacity):
        if not 0.0 <= action.value <= 1.0:
            raise InvalidAction("opacity must lie in [0, 1]")

    new_tree = _clone_for_edit(tree, targets)
    pre = {nid: copy.deepcopy(tree.nodes[nid]) for nid in targets}
    assets_before = set(new_tree.assets)
    warnings_out: list[str] = []

    if isinstance(action, SetStyle):
        d = action.delta
        for nid in targets:
            style = new_tree.nodes[nid].style
            if d.fill_color is not None:
                style.fill_color = d.fill_color
            if d.stroke_color is not None:
                style.stroke_color = d.stroke_color
            if d.font_size is not None:
                style.font_size = d.font_size
            if d.font_color is not None:
                style.font_color = d.font_color
            if d.opacity is not None:
                if not 0.0 <= d.opacity <= 1.0:
                    raise InvalidAction("opacity must lie in [0, 1]")
                style.opacity = d.opacity
            if d.position_offset is not None:
                style.position_offset = d.position_offset
    elif isinstance(action, SetOpacity):
        for nid in targets:
            new_tree.nodes[nid].style.opacity = action.value
    elif isinstance(action, MoveText):
        for nid in targets:
            style = new_tree.nodes[nid].style
            ox, oy = style.position_offset
            style.position_offset = (ox + action.dx, oy + action.dy)
    elif isinstance(action, ApplyPattern):
        first = new_tree.nodes[targets[0]]
        w, h = _asset_box(new_tree, first)
        asset = asset_source(action.asset_desc, w, h)
        kind = action.pattern.kind
        if kind == "semantic":
            patterns.apply_semantic(new_tree, targets, asset)
        elif kind == "unit":
            patterns.apply_unit(new_tree, targets, asset, action.pattern.unit_value)
        elif kind == "height":
            patterns.apply_height(new_tree, targets, asset)
        else:
            patterns.apply_area(new_tree, targets, asset, action.pattern.fill_style)
        warnings_out.extend(
            tag for nid in targets for tag in (new_tree.nodes[nid].overlay.warnings or ())
        )
    elif isinstance(action, ReplaceBackground):
        cw, ch = new_tree.canvas
        asset = asset_source(action.asset_desc, cw, ch)
        patterns.replace_background(new_tree, asset)
    elif isinstance(action, ReplaceTickLabels):
        axis_id = targets[0]
        tick_ids = targets[1:]
        assets: dict[str, PictorialAsset] = {}
        for tid in tick_ids:
            node = new_tree.nodes[tid]
            desc = (action.asset_desc.format(label=node.text)
                    if "{label}" in action.asset_desc
                    else f"{action.asset_desc} {node.text}")
            _, _, w, h = node.region.bbox
            assets[node.text] = asset_source(desc, max(w, 8), max(h, 8))
        patterns.replace_tick_labels(new_tree, axis_id, assets)

    post = {nid: copy.deepcopy(new_tree.nodes[nid]) for nid in targets}
    added = {aid: new_tree.assets[aid] for aid in set(new_tree.assets) - assets_before}
    entry = LogEntry(modification, pre, post, added, tuple(warnings_out))
    return new_tree, entry


def _referenced_assets(tree: ChartTree) -> set[str]:
    refs: set[str] = set()
    for node in tree.nodes.values():
        if node.overlay is not None:
            refs.update(p.asset_id for p in node.overlay.placements)
            if node.overlay.source_asset:
                refs.add(node.overlay.source_asset)
    return refs


def undo(tree: ChartTree, log: EditLog) -> tuple[ChartTree, EditLog]:
    if not log.can_undo:
        raise NothingToUndo("edit log cursor is at the start")
    entry = log.entries[log.cursor - 1]
    new_tree = _clone_for_edit(tree, [])
    for nid, node in entry.pre.items():
        new_tree.nodes[nid] = copy.deepcopy(node)
    live = _referenced_assets(new_tree)
    for aid in entry.added_assets:
        if aid not in live:
            new_tree.assets.pop(aid, None)
    return new_tree, EditLog(log.entries, log.cursor - 1)


def redo(tree: ChartTree, log: EditLog) -> tuple[ChartTree, EditLog]:
    if not log.can_redo:
        raise NothingToRedo("edit log cursor is at the end")
    entry = log.entries[log.cursor]
    new_tree = _clone_for_edit(tree, [])
    for nid, node in entry.post.items():
        new_tree.nodes[nid] = copy.deepcopy(node)
    new_tree.assets.update(entry.added_assets)
    return new_tree, EditLog(log.entries, log.cursor + 1)
