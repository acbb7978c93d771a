"""Cascade-based eye detection and closure metrics.

Detection runs pre-trained stump cascades in the widespread XML
interchange format (stageThreshold / internalNodes / leafValues / rects)
over a sliding window that grows by a scale factor while the image stays
fixed.  Features are area-normalized and divided by the window's pixel
standard deviation; zero-variance windows are rejected outright.  Raw
hits merge by neighbor grouping.

Closure metrics track the running eye-closure duration T, PERCLOS over a
trailing window, and the 0/1/2 video level (T = 0 -> 0, T below the alert
threshold -> 1, otherwise 2).
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import TimestampRegression, VigilError
from .signal_io import BlinkEvent, BlinkTrace, EyeState

log = logging.getLogger(__name__)

DEFAULT_T_ALERT = 3.0          # seconds of closure that escalate to level 2
DEFAULT_PERCLOS_WINDOW = 60.0  # trailing window for the closed-time fraction
EYE_REGION_FRACTION = 0.55     # eyes live in the upper part of a face box

FRAME_SUFFIXES = (".pgm", ".png")


class SchemaError(VigilError):
    """Cascade XML misses or mangles a required element."""


class RectOutOfWindow(VigilError):
    """A feature rectangle pokes outside the base detection window."""


class NotStumpBased(VigilError):
    """A weak classifier tree is deeper than the supported two levels."""


class EmptyImage(VigilError):
    """Image with zero pixels."""


class ImageSmallerThanWindow(VigilError):
    """Image cannot contain even one base detection window."""


class UnsupportedImage(VigilError):
    """Unreadable or unsupported image data."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image; ``pixels`` is (height, width) uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise UnsupportedImage("pixels must be a 2-D array")
        object.__setattr__(self, "pixels", px.astype(np.uint8, copy=False))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def crop(self, x: int, y: int, w: int, h: int) -> "GrayImage":
        return GrayImage(self.pixels[y:y + h, x:x + w])


class IntegralImage:
    """Cumulative-sum tables giving O(1) rectangle sums.

    ``table[y][x]`` holds the sum of all pixels strictly above and left of
    (x, y); the squared table does the same for squared pixels.
    """

    def __init__(self, image: GrayImage):
        if image.width == 0 or image.height == 0:
            raise EmptyImage("cannot integrate an empty image")
        px = image.pixels.astype(np.int64)
        self.width = image.width
        self.height = image.height
        self.table = np.zeros((self.height + 1, self.width + 1), dtype=np.int64)
        self.table[1:, 1:] = px.cumsum(axis=0).cumsum(axis=1)
        self.sq_table = np.zeros_like(self.table)
        self.sq_table[1:, 1:] = (px * px).cumsum(axis=0).cumsum(axis=1)

    def rect_sum(self, x: int, y: int, w: int, h: int) -> int:
        t = self.table
        return int(t[y + h, x + w] - t[y, x + w] - t[y + h, x] + t[y, x])

    def rect_sum_sq(self, x: int, y: int, w: int, h: int) -> int:
        t = self.sq_table
        return int(t[y + h, x + w] - t[y, x + w] - t[y + h, x] + t[y, x])


def integral_image(image: GrayImage) -> IntegralImage:
    return IntegralImage(image)


def _rect_sums(table: np.ndarray, xs: np.ndarray, ys: np.ndarray, w: int, h: int) -> np.ndarray:
    """Rectangle sums at many origins with one shared size."""
    return (
        table[ys + h, xs + w] - table[ys, xs + w] - table[ys + h, xs] + table[ys, xs]
    )


class FeatureRect(NamedTuple):
    x: int
    y: int
    w: int
    h: int
    weight: float


@dataclass(frozen=True)
class HaarFeature:
    rects: tuple[FeatureRect, ...]


class TreeNode(NamedTuple):
    left: int       # child node index if > 0, else leaf index = -left
    right: int
    feature: int
    threshold: float


@dataclass(frozen=True)
class WeakClassifier:
    nodes: tuple[TreeNode, ...]
    leaves: tuple[float, ...]


@dataclass(frozen=True)
class Stage:
    threshold: float
    weaks: tuple[WeakClassifier, ...]


@dataclass(frozen=True)
class HaarCascade:
    window_w: int
    window_h: int
    stages: tuple[Stage, ...]
    features: tuple[HaarFeature, ...]

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def n_weak(self) -> int:
        return sum(len(s.weaks) for s in self.stages)


@dataclass(frozen=True)
class Detection:
    x: int
    y: int
    w: int
    h: int
    score: float


@dataclass(frozen=True)
class DetectParams:
    scale_factor: float = 1.1
    step: int = 2
    min_size: int | None = None
    max_size: int | None = None
    min_neighbors: int = 3
    group_eps: float = 0.2

    def __post_init__(self):
        if self.scale_factor < 1.05:
            raise ValueError("scale_factor must be at least 1.05")
        if self.step < 1:
            raise ValueError("step must be at least 1 pixel")


def _req(elem: ET.Element | None, path: str) -> ET.Element:
    if elem is None:
        raise SchemaError(f"missing element {path!r}")
    return elem


def _req_text(parent: ET.Element, tag: str, path: str) -> str:
    child = _req(parent.find(tag), f"{path}/{tag}")
    if child.text is None or not child.text.strip():
        raise SchemaError(f"empty element {path}/{tag}")
    return child.text.strip()


def _tree_depth(nodes: tuple[TreeNode, ...], idx: int = 0, seen=()) -> int:
    if idx in seen:
        raise SchemaError("weak classifier tree contains a cycle")
    node = nodes[idx]
    depth = 1
    for ptr in (node.left, node.right):
        if ptr > 0:
            if ptr >= len(nodes):
                raise SchemaError(f"node pointer {ptr} out of range")
            depth = max(depth, 1 + _tree_depth(nodes, ptr, seen + (idx,)))
    return depth


def parse_cascade_xml(data: bytes | str) -> HaarCascade:
    """Parse a stump/shallow-tree cascade from the standard XML schema.

    Numeric values are taken exactly as written.  Trees deeper than two
    levels raise :class:`NotStumpBased`; rectangles outside the base
    window raise :class:`RectOutOfWindow`.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaError(f"not well-formed XML: {exc}") from None
    cascade = root if root.tag == "cascade" else _req(root.find("cascade"), "cascade")

    window_w = int(_req_text(cascade, "width", "cascade"))
    window_h = int(_req_text(cascade, "height", "cascade"))
    if window_w < 1 or window_h < 1:
        raise SchemaError("cascade window dimensions must be positive")

    features = []
    features_elem = _req(cascade.find("features"), "cascade/features")
    for fi, feat_elem in enumerate(features_elem.findall("_")):
        path = f"cascade/features/_[{fi}]"
        tilted = feat_elem.find("tilted")
        if tilted is not None and tilted.text and int(tilted.text.strip()) != 0:
            raise SchemaError(f"{path}: tilted features are not supported")
        rects_elem = _req(feat_elem.find("rects"), f"{path}/rects")
        rects = []
        for ri, rect_elem in enumerate(rects_elem.findall("_")):
            tokens = (rect_elem.text or "").split()
            if len(tokens) != 5:
                raise SchemaError(f"{path}/rects/_[{ri}]: expected 'x y w h weight'")
            x, y, w, h = (int(float(t)) for t in tokens[:4])
            weight = float(tokens[4])
            if w < 1 or h < 1 or x < 0 or y < 0 or x + w > window_w or y + h > window_h:
                raise RectOutOfWindow(
                    f"{path}/rects/_[{ri}]: rect ({x},{y},{w},{h}) leaves the "
                    f"{window_w}x{window_h} window"
                )
            rects.append(FeatureRect(x, y, w, h, weight))
        if not rects:
            raise SchemaError(f"{path}: feature has no rectangles")
        features.append(HaarFeature(tuple(rects)))
    if not features:
        raise SchemaError("cascade/features: no features")

    stages = []
    stages_elem = _req(cascade.find("stages"), "cascade/stages")
    for si, stage_elem in enumerate(stages_elem.findall("_")):
        path = f"cascade/stages/_[{si}]"
        threshold = float(_req_text(stage_elem, "stageThreshold", path))
        weaks = []
        weak_root = _req(stage_elem.find("weakClassifiers"), f"{path}/weakClassifiers")
        for wi, weak_elem in enumerate(weak_root.findall("_")):
            wpath = f"{path}/weakClassifiers/_[{wi}]"
            node_tokens = _req_text(weak_elem, "internalNodes", wpath).split()
            leaf_tokens = _req_text(weak_elem, "leafValues", wpath).split()
            if len(node_tokens) % 4 != 0 or not node_tokens:
                raise SchemaError(f"{wpath}/internalNodes: token count not a multiple of 4")
            nodes = []
            for ni in range(0, len(node_tokens), 4):
                left, right = int(node_tokens[ni]), int(node_tokens[ni + 1])
                feat_idx = int(node_tokens[ni + 2])
                thresh = float(node_tokens[ni + 3])
                if not 0 <= feat_idx < len(features):
                    raise SchemaError(f"{wpath}: feature index {feat_idx} out of range")
                nodes.append(TreeNode(left, right, feat_idx, thresh))
            if len(nodes) > 3:
                raise NotStumpBased(
                    f"{wpath}: {len(nodes)} internal nodes exceed depth-2 trees"
                )
            leaves = tuple(float(t) for t in leaf_tokens)
            for node in nodes:
                for ptr in (node.left, node.right):
                    if ptr <= 0 and -ptr >= len(leaves):
                        raise SchemaError(f"{wpath}: leaf index {-ptr} out of range")
            weak = WeakClassifier(tuple(nodes), leaves)
            if _tree_depth(weak.nodes) > 2:
                raise NotStumpBased(f"{wpath}: tree deeper than 2 levels")
            weaks.append(weak)
        if not weaks:
            raise SchemaError(f"{path}: stage has no weak classifiers")
        stages.append(Stage(threshold, tuple(weaks)))
    if not stages:
        raise SchemaError("cascade/stages: no stages")

    return HaarCascade(window_w, window_h, tuple(stages), tuple(features))


def _scale_rect(rect: FeatureRect, scale: float, win_w: int, win_h: int) -> tuple[int, int, int, int]:
    x = min(int(round(rect.x * scale)), win_w - 1)
    y = min(int(round(rect.y * scale)), win_h - 1)
    w = max(1, int(round(rect.w * scale)))
    h = max(1, int(round(rect.h * scale)))
    return x, y, min(w, win_w - x), min(h, win_h - y)


class _ScaledCascade:
    """Feature geometry of one pyramid level, ready for vector evaluation."""

    def __init__(self, cascade: HaarCascade, scale: float):
        self.win_w = int(round(cascade.window_w * scale))
        self.win_h = int(round(cascade.window_h * scale))
        self.area = float(self.win_w * self.win_h)
        self.rects: list[tuple[np.ndarray, ...]] = []
        for feat in cascade.features:
            scaled = [_scale_rect(r, scale, self.win_w, self.win_h) for r in feat.rects]
            xs = np.array([r[0] for r in scaled])
            ys = np.array([r[1] for r in scaled])
            ws = np.array([r[2] for r in scaled])
            hs = np.array([r[3] for r in scaled])
            wts = np.array([r.weight for r in feat.rects])
            self.rects.append((xs, ys, ws, hs, wts))

    def feature_values(
        self, ii: IntegralImage, ox: np.ndarray, oy: np.ndarray, feat_idx: int
    ) -> np.ndarray:
        xs, ys, ws, hs, wts = self.rects[feat_idx]
        total = np.zeros(len(ox))
        for rx, ry, rw, rh, wt in zip(xs, ys, ws, hs, wts):
            total += wt * _rect_sums(ii.table, ox + rx, oy + ry, int(rw), int(rh))
        return total / self.area


def _eval_weak_vec(
    weak: WeakClassifier,
    scaled: _ScaledCascade,
    ii: IntegralImage,
    ox: np.ndarray,
    oy: np.ndarray,
    norm: np.ndarray,
) -> np.ndarray:
    """Vote of one weak classifier for every window, following the tree."""
    votes = np.zeros(len(ox))
    frontier = [(0, np.ones(len(ox), dtype=bool))]
    while frontier:
        idx, active = frontier.pop()
        if not active.any():
            continue
        node = weak.nodes[idx]
        vals = scaled.feature_values(ii, ox[active], oy[active], node.feature)
        goes_left = np.zeros(len(ox), dtype=bool)
        goes_left[active] = vals < node.threshold * norm[active]
        goes_right = active & ~goes_left
        for ptr, mask in ((node.left, goes_left), (node.right, goes_right)):
            if ptr > 0:
                frontier.append((ptr, mask))
            else:
                votes[mask] = weak.leaves[-ptr]
    return votes


def _windows_passing(
    cascade: HaarCascade,
    scaled: _ScaledCascade,
    ii: IntegralImage,
    ox: np.ndarray,
    oy: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Boolean survival mask plus final-stage margin per window."""
    area = scaled.area
    total = _rect_sums(ii.table, ox, oy, scaled.win_w, scaled.win_h)
    total_sq = _rect_sums(ii.sq_table, ox, oy, scaled.win_w, scaled.win_h)
    mean = total / area
    variance = total_sq / area - mean * mean
    alive = variance > 0  # zero-variance windows cannot hold a detection
    norm = np.sqrt(np.where(alive, variance, 1.0))

    margin = np.full(len(ox), -np.inf)
    for stage in cascade.stages:
        if not alive.any():
            break
        idx = np.nonzero(alive)[0]
        stage_sum = np.zeros(len(idx))
        for weak in stage.weaks:
            stage_sum += _eval_weak_vec(
                weak, scaled, ii, ox[idx], oy[idx], norm[idx]
            )
        passed = stage_sum >= stage.threshold
        margin[idx[passed]] = stage_sum[passed] - stage.threshold
        alive[idx[~passed]] = False
    return alive, margin


def detect_objects(
    cascade: HaarCascade,
    image: GrayImage,
    params: DetectParams = DetectParams(),
) -> list[Detection]:
    """Sliding-window, scale-pyramid cascade detection.

    The window grows by ``scale_factor`` per level while the image stays
    fixed; a window survives only if every stage sum reaches its
    threshold, with evaluation stopping at the first failing stage.  With
    ``min_neighbors`` <= 0 the raw surviving windows are returned,
    otherwise clusters of at least ``min_neighbors`` similar windows merge
    into averaged detections.
    """
    if image.width < cascade.window_w or image.height < cascade.window_h:
        raise ImageSmallerThanWindow(
            f"{image.width}x{image.height} image cannot fit the "
            f"{cascade.window_w}x{cascade.window_h} window"
        )
    ii = integral_image(image)
    raw: list[Detection] = []
    scale = 1.0
    seen_sizes: set[tuple[int, int]] = set()
    while True:
        scaled = _ScaledCascade(cascade, scale)
        if scaled.win_w > image.width or scaled.win_h > image.height:
            break
        # Rounding can repeat an integer window size; scan each size once.
        size_ok = (scaled.win_w, scaled.win_h) not in seen_sizes
        seen_sizes.add((scaled.win_w, scaled.win_h))
        if params.min_size is not None and min(scaled.win_w, scaled.win_h) < params.min_size:
            size_ok = False
        if params.max_size is not None and max(scaled.win_w, scaled.win_h) > params.max_size:
            size_ok = False
        if size_ok:
            xs = np.arange(0, image.width - scaled.win_w + 1, params.step)
            ys = np.arange(0, image.height - scaled.win_h + 1, params.step)
            ox, oy = (g.ravel() for g in np.meshgrid(xs, ys, indexing="xy"))
            alive, margin = _windows_passing(cascade, scaled, ii, ox, oy)
            for i in np.nonzero(alive)[0]:
                raw.append(
                    Detection(int(ox[i]), int(oy[i]), scaled.win_w, scaled.win_h,
                              float(margin[i]))
                )
        scale *= params.scale_factor
    if params.min_neighbors <= 0:
        return raw
    return group_rectangles(raw, params.min_neighbors, params.group_eps)


def _similar(a: Detection, b: Detection, eps: float) -> bool:
    delta = eps * 0.5 * (min(a.w, b.w) + min(a.h, b.h))
    return (
        abs(a.x - b.x) <= delta
        and abs(a.y - b.y) <= delta
        and abs(a.x + a.w - b.x - b.w) <= delta
        and abs(a.y + a.h - b.y - b.h) <= delta
    )


def group_rectangles(
    rects: list[Detection], min_neighbors: int = 3, eps: float = 0.2
) -> list[Detection]:
    """Merge similar rectangles; clusters smaller than ``min_neighbors`` drop.

    Similarity is transitive-closure clustering on near-equal corners; the
    merged box is the rounded average of its members and carries the best
    member score.  The outcome does not depend on input order.
    """
    n = len(rects)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _similar(rects[i], rects[j], eps):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    clusters: dict[int, list[Detection]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(rects[i])

    merged = []
    for members in clusters.values():
        if len(members) < min_neighbors:
            continue
        k = len(members)
        merged.append(
            Detection(
                int(round(sum(m.x for m in members) / k)),
                int(round(sum(m.y for m in members) / k)),
                int(round(sum(m.w for m in members) / k)),
                int(round(sum(m.h for m in members) / k)),
                max(m.score for m in members),
            )
        )
    merged.sort(key=lambda d: (d.x, d.y, d.w, d.h))
    return merged


def largest_detection(detections: list[Detection]) -> Detection | None:
    if not detections:
        return None
    return max(detections, key=lambda d: (d.w * d.h, -d.x, -d.y))


def classify_eye_state(
    frame: GrayImage,
    face: Detection,
    eye_cascade: HaarCascade,
    params: DetectParams = DetectParams(),
) -> EyeState:
    """OPEN when the open-eye cascade fires inside the upper face region.

    The eye cascade is trained on open eyes, so at least one hit in the
    upper portion of the face box reads as OPEN and silence as CLOSED.
    Degenerate face boxes classify as CLOSED with a warning.
    """
    if face.w <= 0 or face.h <= 0:
        log.warning("degenerate face box %s; treating eyes as closed", face)
        return EyeState.CLOSED
    x = max(0, face.x)
    y = max(0, face.y)
    w = min(face.w, frame.width - x)
    h = min(max(1, int(round(face.h * EYE_REGION_FRACTION))), frame.height - y)
    if w < eye_cascade.window_w or h < eye_cascade.window_h:
        return EyeState.CLOSED
    roi = frame.crop(x, y, w, h)
    hits = detect_objects(eye_cascade, roi, params)
    return EyeState.OPEN if hits else EyeState.CLOSED


class ClosureSample(NamedTuple):
    T: float
    perclos: float
    video_level: int


class ClosureTracker:
    """Single-writer tracker of eye closure over a timestamped state stream.

    ``T`` is the running closure duration (0 while open); PERCLOS is the
    closed-time fraction of the trailing window.  The video level is a
    pure function of T: 0 at T = 0, 1 below ``t_alert``, 2 at or above.
    """

    def __init__(
        self,
        t_alert: float = DEFAULT_T_ALERT,
        perclos_window: float = DEFAULT_PERCLOS_WINDOW,
    ):
        if t_alert <= 0:
            raise ValueError("t_alert must be positive")
        if perclos_window <= 0:
            raise ValueError("perclos_window must be positive")
        self.t_alert = t_alert
        self.perclos_window = perclos_window
        self.current_state: EyeState | None = None
        self.closure_start: float | None = None
        self.history: deque[tuple[float, EyeState]] = deque()
        self._first_time: float | None = None
        self._last_time: float | None = None

    def update(self, timestamp: float, state: EyeState) -> ClosureSample:
        if self._last_time is not None and timestamp < self._last_time:
            raise TimestampRegression(
                f"timestamp {timestamp} precedes {self._last_time}"
            )
        if self._first_time is None:
            self._first_time = timestamp
        self._last_time = timestamp

        if state is not self.current_state:
            self.current_state = state
            self.history.append((timestamp, state))
            self.closure_start = timestamp if state is EyeState.CLOSED else None

        T = timestamp - self.closure_start if self.closure_start is not None else 0.0
        level = 0 if T == 0 else (1 if T < self.t_alert else 2)
        return ClosureSample(T, self._perclos(timestamp), level)

    def _perclos(self, now: float) -> float:
        window_start = max(now - self.perclos_window, self._first_time)
        span = now - window_start
        if span <= 0:
            return 1.0 if self.current_state is EyeState.CLOSED else 0.0
        # Drop transitions that ended before the window, keeping the one
        # that defines the state at window_start.
        while len(self.history) >= 2 and self.history[1][0] <= window_start:
            self.history.popleft()
        closed = 0.0
        events = list(self.history)
        for i, (t, state) in enumerate(events):
            seg_start = max(t, window_start)
            seg_end = events[i + 1][0] if i + 1 < len(events) else now
            seg_end = min(seg_end, now)
            if state is EyeState.CLOSED and seg_end > seg_start:
                closed += seg_end - seg_start
        return min(1.0, closed / span)


def update_closure(
    tracker: ClosureTracker, timestamp: float, state: EyeState
) -> ClosureSample:
    """Advance the tracker one observation; see :meth:`ClosureTracker.update`."""
    return tracker.update(timestamp, state)


def states_to_trace(
    states: list[tuple[float, EyeState]], duration: float
) -> BlinkTrace:
    """Collapse a per-frame state sequence into an alternating blink trace."""
    events = []
    for t, state in states:
        if not events or events[-1].state is not state:
            events.append(BlinkEvent(t, state))
    return BlinkTrace(tuple(events), duration)


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval <= 255."""
    if not data.startswith(b"P5"):
        raise UnsupportedImage("not a binary P5 PGM")
    # Header tokens may be separated by whitespace and '#' comments.
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise UnsupportedImage(f"bad PGM header token {token!r}")
        fields.append(int(token))
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = fields
    if maxval > 255:
        raise UnsupportedImage(f"PGM maxval {maxval} exceeds 8 bits")
    expected = width * height
    raster = data[pos:pos + expected]
    if len(raster) != expected:
        raise UnsupportedImage(
            f"PGM raster holds {len(raster)} bytes, expected {expected}"
        )
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def write_pgm(image: GrayImage) -> bytes:
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def load_frame(path: str | Path) -> GrayImage:
    """Load one grayscale frame; PGM natively, PNG through Pillow."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return parse_pgm(path.read_bytes())
    try:
        from PIL import Image
    except ImportError as exc:
        raise UnsupportedImage("Pillow is required for non-PGM frames") from exc
    with Image.open(path) as img:
        return GrayImage(np.asarray(img.convert("L")))


def list_frames(directory: str | Path) -> list[Path]:
    """Frame files in lexicographic order."""
    directory = Path(directory)
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in FRAME_SUFFIXES
    )
