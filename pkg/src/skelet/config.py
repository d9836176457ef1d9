"""Flat ``key = value`` experiment configs with repeatable [matrix] blocks.

Format
------
Global keys come first, one per line; ``#`` starts a comment.  Each
``[matrix]`` line opens a new matrix block whose keys apply to that block
only.  Parse errors report the offending line number.

Global keys:
  algorithms  comma list from {rsvd, gks, rgks, rid, lss}
  ks          comma list of approximation ranks
  p           fixed oversampling (or: p_rule = ceil-k-over-10)
  q           power iteration count (default 0)
  trials      Monte-Carlo repetitions per (matrix, algorithm, k)
  seed        master seed; every draw is keyed by (seed, trial, role)
  norms       comma list from {spectral, frobenius}
  outputs     comma list from {errors, bounds, angles, projector-stats}
  f           strong-RRQR parameter used by bound evaluators (default 2.0)
  pivoter     golub-businger (default) or gu-eisenstat
  rid_mode    plain (default, k+p sketch rows) or matched (min(m, 2(k+p)))

Matrix-block keys:
  label       name echoed into the CSV comments
  n           square dimension
  spectrum    profile: "geometric RHO" | "staircase SHELF DROP" |
              "flat-then-geometric K0 RHO" | "custom v1,v2,..."
  subspace    mixed-hadamard-permutation | random-orthogonal |
              noisy-permutation | noisy-hadamard
  alpha       mixing weight in [0, 1] (mixed subspace kind)
  coherence_target
              calibrate alpha to this coherence instead of giving it
  target_rank rank at which the coherence target is measured
  delta       noise scale for the noisy subspace kinds
  seed_offset added to the master seed for this block's construction
"""

from dataclasses import dataclass, field

import numpy as np

from .testmatrices import (
    SUBSPACE_KINDS,
    TestMatrixSpec,
    custom_spectrum,
    flat_then_geometric_spectrum,
    geometric_spectrum,
    staircase_spectrum,
)

ALGORITHMS = ("rsvd", "gks", "rgks", "rid", "lss")
NORMS = ("spectral", "frobenius")
OUTPUTS = ("errors", "bounds", "angles", "projector-stats")
PROJECTOR_KINDS = ("noisy-permutation", "noisy-hadamard", "random-orthogonal")


class ConfigError(ValueError):
    """Config parse or validation failure, carrying a line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class MatrixBlock:
    label: str = ""
    n: int = 0
    spectrum_text: str = ""
    subspace: str = "random-orthogonal"
    alpha: float | None = None
    coherence_target: float | None = None
    target_rank: int | None = None
    delta: float | None = None
    seed_offset: int = 0
    line_no: int = 0

    def spectrum(self):
        return parse_spectrum(self.spectrum_text, self.n, self.line_no)

    def to_spec(self, master_seed, alpha=None):
        """TestMatrixSpec with the block's draws keyed off the master seed."""
        a = alpha if alpha is not None else (self.alpha or 0.0)
        return TestMatrixSpec(
            n=self.n,
            spectrum=self.spectrum(),
            subspace=self.subspace,
            alpha=a,
            delta=self.delta,
            seed=master_seed + self.seed_offset,
        )


@dataclass
class ExperimentConfig:
    blocks: list = field(default_factory=list)
    algorithms: tuple = ("rsvd", "rgks")
    ks: tuple = (8,)
    p_rule: str = "fixed"
    p_fixed: int = 2
    q: int = 0
    trials: int = 10
    seed: int = 0
    norms: tuple = ("frobenius",)
    outputs: tuple = ("errors",)
    f: float = 2.0
    pivoter: str = "golub-businger"
    rid_mode: str = "plain"
    # projector-experiment extras
    kinds: tuple = PROJECTOR_KINDS
    histogram_bins: int = 20

    def oversampling(self, k):
        if self.p_rule == "ceil-k-over-10":
            return int(np.ceil(k / 10))
        return self.p_fixed


def parse_spectrum(text, n, line_no=0):
    parts = text.split()
    if not parts:
        raise ConfigError(line_no, "empty spectrum specification")
    kind = parts[0]
    try:
        if kind == "geometric":
            return geometric_spectrum(n, float(parts[1]))
        if kind == "staircase":
            return staircase_spectrum(n, int(parts[1]), float(parts[2]))
        if kind == "flat-then-geometric":
            return flat_then_geometric_spectrum(n, int(parts[1]), float(parts[2]))
        if kind == "custom":
            values = [float(v) for v in " ".join(parts[1:]).split(",") if v]
            if len(values) != n:
                raise ConfigError(
                    line_no, f"custom spectrum needs {n} values, got {len(values)}"
                )
            return custom_spectrum(values)
    except ConfigError:
        raise
    except (IndexError, ValueError) as exc:
        raise ConfigError(line_no, f"bad spectrum {text!r}: {exc}") from exc
    raise ConfigError(line_no, f"unknown spectrum kind {kind!r}")


def _parse_list(value, allowed, line_no, what):
    items = tuple(v.strip() for v in value.split(",") if v.strip())
    for item in items:
        if item not in allowed:
            raise ConfigError(
                line_no, f"unknown {what} {item!r}; expected one of {allowed}"
            )
    if not items:
        raise ConfigError(line_no, f"empty {what} list")
    return items


def _parse_int(value, line_no, key):
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(line_no, f"{key} expects an integer, got {value!r}") from exc


def _parse_float(value, line_no, key):
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(line_no, f"{key} expects a number, got {value!r}") from exc


def iter_config_lines(text):
    """Yield (line_no, content) pairs with comments and blanks stripped."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_key_values(text):
    """Parse a bare key-value block (no sections) into a dict.

    Used for TestMatrixSpec files consumed by gen-matrix.
    """
    out = {}
    for i, line in iter_config_lines(text):
        if "=" not in line:
            raise ConfigError(i, f"expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = (value, i)
    return out


def parse_matrix_spec(text, default_seed=0):
    """A TestMatrixSpec from a bare key-value block."""
    kv = parse_key_values(text)

    def need(key):
        if key not in kv:
            raise ConfigError(0, f"missing required key {key!r}")
        return kv[key]

    n_value, n_line = need("n")
    n = _parse_int(n_value, n_line, "n")
    spectrum_text, s_line = need("spectrum")
    subspace, sub_line = kv.get("subspace", ("random-orthogonal", 0))
    if subspace not in SUBSPACE_KINDS:
        raise ConfigError(sub_line, f"unknown subspace kind {subspace!r}")
    alpha = _parse_float(*kv["alpha"], "alpha") if "alpha" in kv else 0.0
    delta = _parse_float(*kv["delta"], "delta") if "delta" in kv else None
    seed = _parse_int(*kv["seed"], "seed") if "seed" in kv else default_seed
    return TestMatrixSpec(
        n=n,
        spectrum=parse_spectrum(spectrum_text, n, s_line),
        subspace=subspace,
        alpha=alpha,
        delta=delta,
        seed=seed,
    )


def parse_config(text):
    """Parse a full experiment config (globals + [matrix] blocks)."""
    cfg = ExperimentConfig()
    cfg.blocks = []
    current = None
    seen_global = {}

    for i, line in iter_config_lines(text):
        if line.startswith("["):
            if line != "[matrix]":
                raise ConfigError(i, f"unknown section {line!r}; only [matrix]")
            current = MatrixBlock(line_no=i)
            cfg.blocks.append(current)
            continue
        if "=" not in line:
            raise ConfigError(i, f"expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))

        if current is not None:
            _apply_block_key(current, key, value, i)
        else:
            seen_global[key] = True
            _apply_global_key(cfg, key, value, i)

    _validate(cfg)
    return cfg


def _apply_global_key(cfg, key, value, i):
    if key == "algorithms":
        cfg.algorithms = _parse_list(value, ALGORITHMS, i, "algorithm")
    elif key == "ks":
        cfg.ks = tuple(_parse_int(v.strip(), i, "ks") for v in value.split(","))
    elif key == "p":
        cfg.p_rule, cfg.p_fixed = "fixed", _parse_int(value, i, "p")
    elif key == "p_rule":
        if value not in ("fixed", "ceil-k-over-10"):
            raise ConfigError(i, f"unknown p_rule {value!r}")
        cfg.p_rule = value
    elif key == "q":
        cfg.q = _parse_int(value, i, "q")
    elif key == "trials":
        cfg.trials = _parse_int(value, i, "trials")
    elif key == "seed":
        cfg.seed = _parse_int(value, i, "seed")
    elif key == "norms":
        cfg.norms = _parse_list(value, NORMS, i, "norm")
    elif key == "outputs":
        cfg.outputs = _parse_list(value, OUTPUTS, i, "output")
    elif key == "f":
        cfg.f = _parse_float(value, i, "f")
    elif key == "pivoter":
        if value not in ("golub-businger", "gu-eisenstat"):
            raise ConfigError(i, f"unknown pivoter {value!r}")
        cfg.pivoter = value
    elif key == "rid_mode":
        if value not in ("plain", "matched"):
            raise ConfigError(i, f"unknown rid_mode {value!r}")
        cfg.rid_mode = value
    elif key == "kinds":
        cfg.kinds = _parse_list(value, PROJECTOR_KINDS, i, "subspace kind")
    elif key == "histogram_bins":
        cfg.histogram_bins = _parse_int(value, i, "histogram_bins")
    else:
        raise ConfigError(i, f"unknown global key {key!r}")


def _apply_block_key(block, key, value, i):
    if key == "label":
        block.label = value
    elif key == "n":
        block.n = _parse_int(value, i, "n")
    elif key == "spectrum":
        block.spectrum_text = value
    elif key == "subspace":
        if value not in SUBSPACE_KINDS:
            raise ConfigError(i, f"unknown subspace kind {value!r}")
        block.subspace = value
    elif key == "alpha":
        block.alpha = _parse_float(value, i, "alpha")
    elif key == "coherence_target":
        block.coherence_target = _parse_float(value, i, "coherence_target")
    elif key == "target_rank":
        block.target_rank = _parse_int(value, i, "target_rank")
    elif key == "delta":
        block.delta = _parse_float(value, i, "delta")
    elif key == "seed_offset":
        block.seed_offset = _parse_int(value, i, "seed_offset")
    else:
        raise ConfigError(i, f"unknown matrix key {key!r}")


def _validate(cfg):
    if cfg.trials < 1:
        raise ConfigError(0, "trials must be >= 1")
    if not cfg.blocks:
        raise ConfigError(0, "config declares no [matrix] block")
    for b in cfg.blocks:
        if b.n < 2:
            raise ConfigError(b.line_no, "matrix block needs n >= 2")
        if not b.spectrum_text:
            raise ConfigError(b.line_no, "matrix block needs a spectrum")
        b.spectrum()  # raise early on malformed profiles
        for k in cfg.ks:
            if not 1 <= k < b.n:
                raise ConfigError(
                    b.line_no, f"rank k={k} out of range for n={b.n}"
                )
