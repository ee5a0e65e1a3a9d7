"""YAML run-configuration loader.

Key names are documented in the README; everything except ``seed`` and
``instruments`` has a default.  Relative CSV paths resolve against the
config file's directory.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .data import InstrumentSource, SyntheticSpec
from .errors import ConfigError
from .features import FeatureParams
from .meta import MODE_PROFITABLE_LIST
from .models import KIND_ORDER
from .pipeline import RunConfig

_SYNTH_KEYS = {"kind", "length", "volatility_pct", "persistence", "seed"}


def _parse_source(entry, base: Path) -> InstrumentSource:
    if not isinstance(entry, dict) or "symbol" not in entry:
        raise ConfigError(f"instrument entry needs a symbol: {entry!r}")
    symbol = str(entry["symbol"])
    csv_path = entry.get("csv")
    synthetic = entry.get("synthetic")
    if (csv_path is None) == (synthetic is None):
        raise ConfigError(f"instrument {symbol!r} needs exactly one of 'csv' or 'synthetic'")
    if csv_path is not None:
        path = Path(csv_path)
        if not path.is_absolute():
            path = base / path
        return InstrumentSource(symbol=symbol, csv_path=path)
    if not isinstance(synthetic, dict):
        raise ConfigError(f"instrument {symbol!r}: 'synthetic' must be a mapping")
    unknown = set(synthetic) - _SYNTH_KEYS
    if unknown:
        raise ConfigError(f"instrument {symbol!r}: unknown synthetic keys {sorted(unknown)}")
    try:
        spec = SyntheticSpec(
            kind=str(synthetic.get("kind", "random_walk")),
            length=int(synthetic["length"]),
            volatility_pct=float(synthetic.get("volatility_pct", 1.0)),
            persistence=float(synthetic.get("persistence", 0.65)),
            seed=int(synthetic.get("seed", 0)),
        )
    except KeyError as exc:
        raise ConfigError(f"instrument {symbol!r}: synthetic spec missing {exc}") from None
    spec.validate()
    return InstrumentSource(symbol=symbol, synthetic=spec)


def load_config(
    path,
    seed_override: int | None = None,
    out_override=None,
    store_override=None,
) -> RunConfig:
    """Read a YAML config file into a validated :class:`RunConfig`."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    base = path.parent

    known = {
        "seed", "out_dir", "store", "instruments", "features", "split",
        "models", "grids", "selection_mode", "short_on_down", "windows",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")

    seed = seed_override if seed_override is not None else doc.get("seed")
    if seed is None:
        raise ConfigError(f"{path}: a seed is required (config key 'seed' or --seed)")

    instruments = doc.get("instruments")
    if not instruments:
        raise ConfigError(f"{path}: config lists no instruments")
    sources = tuple(_parse_source(entry, base) for entry in instruments)

    feat = doc.get("features") or {}
    try:
        features = FeatureParams(
            sma_period=int(feat.get("sma_period", 14)),
            rsi_period=int(feat.get("rsi_period", 14)),
            macd_fast=int(feat.get("macd_fast", 12)),
            macd_slow=int(feat.get("macd_slow", 26)),
            macd_signal=int(feat.get("macd_signal", 9)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad features section: {exc}") from None

    split = doc.get("split") or {}
    models = doc.get("models")
    grids_doc = doc.get("grids") or {}
    grids = {kind: {k: tuple(v) for k, v in axes.items()} for kind, axes in grids_doc.items()}

    out_dir = Path(out_override if out_override is not None else doc.get("out_dir", "out"))
    if not out_dir.is_absolute():
        out_dir = base / out_dir
    store = store_override if store_override is not None else doc.get("store")
    store_path = Path(store) if store is not None else out_dir / "record_store.csv"
    if not store_path.is_absolute():
        store_path = base / store_path

    config = RunConfig(
        sources=sources,
        seed=int(seed),
        out_dir=out_dir,
        store_path=store_path,
        features=features,
        test_frac=float(split.get("test_frac", 0.05)),
        val_frac=float(split.get("val_frac", 0.10)),
        model_kinds=tuple(models) if models else KIND_ORDER,
        grids=grids,
        selection_mode=str(doc.get("selection_mode", MODE_PROFITABLE_LIST)),
        short_on_down=bool(doc.get("short_on_down", True)),
        windows=int(doc.get("windows", 1)),
    )
    config.validate()
    return config
