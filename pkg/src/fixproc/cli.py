"""Command-line pipeline with reproducible JSON configs.

Every command reads the canonical fixation CSV, applies the standard
filtering, and writes its outputs into the configured directory. A config
file supplies defaults; command-line flags override it. Stochastic commands
require an explicit seed and stamp (seed, config hash) into their output
metadata, so any Monte Carlo artifact can be regenerated exactly.

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .compare import fisher_combine, permutation_test, shift_function
from .core import DataError, Dataset, NumericError, Window
from .density import (
    estimate_intensity,
    quadrat_chisq,
    residual_intensities,
    select_bandwidth_cv,
)
from .envelopes import CurveMatrix, default_grid, envelope_report, rank_envelope
from .fitdist import fit_gamma_mle, gamma_qq
from .ingest import ingest_pipeline, write_fixations, write_saccades
from .simulate import build_model, provenance_to_json, runs_to_dataset, simulate_many
from .summaries import (
    ball_union_coverage,
    convex_hull_coverage,
    curve_to_csv,
    curve_to_dict,
    resample_curve,
    scanpath_length,
    transition_curves,
)
from .svgplot import heatmap_svg, panel_grid_svg, shift_plot_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

STATS = ("hull", "ball", "scanpath")


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    input: str | None = None
    out: str = "fixproc_out"
    window: tuple[float, float, float, float] = (0.0, 0.0, 770.0, 768.0)
    trial_length: float = 180_000.0
    min_fixation_ms: float = 40.0
    group: str | None = None
    painting: str | None = None
    h: float | None = None
    h1: float | None = None
    h2: float | None = None
    h_grid: tuple[float, ...] | None = None
    interval_ms: float = 30_000.0
    q: int = 5
    m: int = 10_000
    seed: int | None = None
    n_runs: int = 200
    radius: float = 35.0
    raster: float = 1.0
    p_long: float = 0.2
    n_angles: int = 720
    nx: int = 128
    ny: int = 128
    alpha: float = 0.05
    grid_points: int = 361
    source: str = "fixation_duration"
    stat: str = "all"
    split: str = "group"
    svg: bool = True
    use_first_surface: bool = True

    def window_obj(self) -> Window:
        return Window(*self.window)

    def canonical(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        d["h_grid"] = list(self.h_grid) if self.h_grid is not None else None
        # where outputs land does not affect what they contain
        d.pop("out")
        return d

    def sha256(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _load_config(path: str | None, overrides: dict) -> PipelineConfig:
    values: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                values = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError("config file must hold one JSON object")
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = PipelineConfig(**values)
    if isinstance(cfg.window, list):
        cfg.window = tuple(float(v) for v in cfg.window)
    if len(cfg.window) != 4:
        raise ConfigError("window must be [x_min, y_min, x_max, y_max]")
    if cfg.h_grid is not None:
        cfg.h_grid = tuple(float(v) for v in cfg.h_grid)
    for name in ("trial_length", "interval_ms", "radius", "raster", "nx", "ny",
                 "q", "n_runs", "m", "n_angles", "grid_points"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if not 0 < cfg.alpha < 1:
        raise ConfigError("alpha must be in (0, 1)")
    if not 0 <= cfg.p_long <= 1:
        raise ConfigError("p_long must be in [0, 1]")
    return cfg


def _require(cfg: PipelineConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required for this command")


def _meta(cfg: PipelineConfig, command: str) -> dict:
    return {
        "command": command,
        "seed": cfg.seed,
        "config_sha256": cfg.sha256(),
        "fixproc_version": __version__,
    }


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _outdir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_filtered(cfg: PipelineConfig):
    _require(cfg, "input")
    dataset, saccades, report = ingest_pipeline(
        cfg.input, cfg.min_fixation_ms, cfg.window_obj(), cfg.trial_length
    )
    if cfg.painting is not None:
        dataset.sequences = [s for s in dataset.sequences if s.painting_id == cfg.painting]
    if cfg.group is not None:
        dataset.sequences = dataset.by_group(cfg.group)
    if not dataset.sequences:
        raise DataError("no sequences left after group/painting filters")
    if all(len(s) == 0 for s in dataset.sequences):
        raise DataError("no fixations left after exclusion filtering")
    keys = {(s.subject_id, s.painting_id) for s in dataset.sequences}
    saccades = {k: v for k, v in saccades.items() if k in keys}
    return dataset, saccades, report


def _pick_bandwidth(cfg: PipelineConfig, points, w: Window) -> float:
    if cfg.h is not None:
        return cfg.h
    h_grid = cfg.h_grid if cfg.h_grid is not None else tuple(np.geomspace(8.0, 64.0, 9))
    return select_bandwidth_cv(points, w, h_grid, cfg.nx, cfg.ny)


def cmd_ingest(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, saccades, report = _load_filtered(cfg)
    write_fixations(dataset, out / "fixations_clean.csv")
    write_saccades(saccades, out / "saccades.csv")
    report.to_json(out / "ingest_report.json")


def cmd_intensity(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, _, _ = _load_filtered(cfg)
    points = dataset.pooled_locations()
    h = _pick_bandwidth(cfg, points, dataset.window)
    grid = estimate_intensity(points, dataset.window, h, cfg.nx, cfg.ny)
    grid.to_csv(out / "intensity.csv")
    payload = grid.to_dict()
    payload["meta"] = _meta(cfg, "intensity")
    payload["n_points"] = int(len(points))
    _write_json(out / "intensity.json", payload)
    if cfg.svg:
        label = cfg.group or "all"
        (out / "intensity.svg").write_text(
            heatmap_svg(grid, f"intensity ({label}, h={h:g})")
        )


def cmd_residuals(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, _, _ = _load_filtered(cfg)
    h = _pick_bandwidth(cfg, dataset.pooled_locations(), dataset.window)
    grids = residual_intensities(dataset, cfg.interval_ms, h, cfg.nx, cfg.ny)
    combined = {"meta": _meta(cfg, "residuals"), "h": h, "interval_ms": cfg.interval_ms,
                "intervals": []}
    for j, grid in enumerate(grids):
        grid.to_csv(out / f"residual_{j:02d}.csv")
        combined["intervals"].append(grid.to_dict())
        if cfg.svg:
            start = j * cfg.interval_ms / 1000.0
            (out / f"residual_{j:02d}.svg").write_text(
                heatmap_svg(grid, f"residual intensity, {start:g}s +", diverging=True)
            )
    _write_json(out / "residuals.json", combined)


def cmd_quadrat(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, _, _ = _load_filtered(cfg)
    result = quadrat_chisq(dataset.pooled_locations(), dataset.window, cfg.q)
    payload = result.to_dict()
    payload["meta"] = _meta(cfg, "quadrat")
    payload["q"] = cfg.q
    _write_json(out / "quadrat.json", payload)


def _interval_durations(dataset: Dataset, interval: float) -> list[np.ndarray]:
    onsets = np.concatenate([s.onsets() for s in dataset.sequences if len(s)])
    durs = np.concatenate([s.durations() for s in dataset.sequences if len(s)])
    k = int(np.ceil(dataset.trial_length / interval))
    return [durs[(onsets >= j * interval) & (onsets < (j + 1) * interval)] for j in range(k)]


def cmd_shift(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    if cfg.split not in ("group", "interval"):
        raise ConfigError("--split must be 'group' or 'interval'")
    dataset, _, _ = _load_filtered(cfg)
    curves = []
    if cfg.split == "group":
        x = np.concatenate([s.durations() for s in dataset.by_group("novice")] or [np.empty(0)])
        y = np.concatenate([s.durations() for s in dataset.by_group("non_novice")] or [np.empty(0)])
        curves.append(("novice_vs_non_novice", shift_function(x, y, cfg.alpha)))
    else:
        buckets = _interval_durations(dataset, cfg.interval_ms)
        for j in range(1, len(buckets)):
            curves.append(
                (f"interval_{j + 1}_vs_1", shift_function(buckets[0], buckets[j], cfg.alpha))
            )
    payload = {"meta": _meta(cfg, "shift"), "split": cfg.split,
               "curves": {name: c.to_dict() for name, c in curves}}
    _write_json(out / "shift.json", payload)
    if cfg.svg:
        for name, c in curves:
            (out / f"shift_{name}.svg").write_text(shift_plot_svg(c, name))


def _single_painting(cfg: PipelineConfig, dataset: Dataset) -> Dataset:
    paintings = dataset.painting_ids()
    if len(paintings) > 1:
        raise DataError(
            f"multiple paintings {paintings}; pick one with --painting"
        )
    return dataset


def cmd_compare_intensity(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    _require(cfg, "seed")
    dataset, _, _ = _load_filtered(cfg)
    dataset = _single_painting(cfg, dataset)
    result = permutation_test(
        dataset, m=cfg.m, h1=cfg.h1, h2=cfg.h2, seed=cfg.seed,
        nx=cfg.nx, ny=cfg.ny, h_grid=cfg.h_grid,
    )
    payload = result.to_dict()
    payload["meta"] = _meta(cfg, "compare-intensity")
    _write_json(out / "ratio_test.json", payload)
    result.r_grid.to_csv(out / "log_ratio.csv")
    if cfg.svg:
        (out / "log_ratio.svg").write_text(
            heatmap_svg(result.r_grid, f"log density ratio (p={result.p:.4g})", diverging=True)
        )


def _source_sample(cfg: PipelineConfig, dataset, saccades) -> np.ndarray:
    if cfg.source == "fixation_duration":
        return np.concatenate([s.durations() for s in dataset.sequences if len(s)])
    attr = {"saccade_duration": "duration", "saccade_length": "length"}.get(cfg.source)
    if attr is None:
        raise ConfigError(f"unknown source {cfg.source!r}")
    vals = [getattr(s, attr) for sacs in saccades.values() for s in sacs if s.valid]
    return np.array([v for v in vals if v > 0])


def cmd_fit(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, saccades, _ = _load_filtered(cfg)
    fit = fit_gamma_mle(_source_sample(cfg, dataset, saccades), cfg.source)
    payload = fit.to_dict()
    payload["meta"] = _meta(cfg, "fit")
    payload["group"] = cfg.group
    _write_json(out / f"fit_{cfg.source}.json", payload)


def cmd_qq(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, saccades, _ = _load_filtered(cfg)
    sample = _source_sample(cfg, dataset, saccades)
    fit = fit_gamma_mle(sample, cfg.source)
    band = gamma_qq(sample, fit, cfg.alpha)
    band.to_csv(out / f"qq_{cfg.source}.csv")
    _write_json(
        out / f"qq_{cfg.source}.json",
        {"meta": _meta(cfg, "qq"), "fit": fit.to_dict(),
         "line_inside_band": band.line_inside(), "alpha": cfg.alpha},
    )


def _build_group_model(cfg: PipelineConfig, dataset, saccades, group: str):
    return build_model(
        dataset, group, h=cfg.h, h_grid=cfg.h_grid, nx=cfg.nx, ny=cfg.ny,
        p_long=cfg.p_long, n_angles=cfg.n_angles,
        use_first_surface=cfg.use_first_surface, saccades=saccades,
    )


def cmd_simulate(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    _require(cfg, "seed", "group")
    dataset, saccades, _ = _load_filtered(cfg)
    model = _build_group_model(cfg, dataset, saccades, cfg.group)
    runs = simulate_many(model, cfg.n_runs, cfg.seed)
    write_fixations(runs_to_dataset(runs, model.window, model.trial_length),
                    out / "sim_fixations.csv")
    meta = _meta(cfg, "simulate")
    meta["model"] = model.to_dict()
    provenance_to_json(runs, out / "sim_provenance.json", meta)


def _summary_curves(seq, w, cfg: PipelineConfig, end: float) -> dict:
    return {
        "hull": convex_hull_coverage(seq, w, domain_end=end),
        "ball": ball_union_coverage(seq, w, cfg.radius, cfg.raster, domain_end=end),
        "scanpath": scanpath_length(seq, domain_end=end),
    }


def cmd_summaries(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    dataset, _, _ = _load_filtered(cfg)
    bundle: dict = {"meta": _meta(cfg, "summaries"), "subjects": {}}
    for seq in dataset.sequences:
        name = f"{seq.subject_id}_{seq.painting_id}"
        curves = _summary_curves(seq, dataset.window, cfg, dataset.trial_length)
        entry = {stat: curve_to_dict(c) for stat, c in curves.items()}
        for stat, c in curves.items():
            curve_to_csv(c, out / f"summary_{name}_{stat}.csv")
        if len(seq) >= 2:
            entry["transitions"] = transition_curves(
                seq, dataset.window, domain_end=dataset.trial_length
            ).to_dict()
        bundle["subjects"][name] = entry
    _write_json(out / "summaries.json", bundle)


def _stat_list(cfg: PipelineConfig) -> list[str]:
    if cfg.stat == "all":
        return list(STATS)
    if cfg.stat not in STATS:
        raise ConfigError(f"--stat must be one of {STATS + ('all',)}")
    return [cfg.stat]


def _group_envelopes(cfg: PipelineConfig, dataset, saccades, group: str, grid):
    """Model, simulations, and envelopes + observed overlays for one group."""
    model = _build_group_model(cfg, dataset, saccades, group)
    runs = simulate_many(model, cfg.n_runs, cfg.seed)
    end = model.trial_length
    observed_seqs = dataset.by_group(group)
    sim_summary = [_summary_curves(r.sequence, model.window, cfg, end) for r in runs]
    # a subject appears once per painting; key on both
    obs_summary = {
        f"{s.subject_id}:{s.painting_id}": _summary_curves(s, model.window, cfg, end)
        for s in observed_seqs
    }

    result: dict = {"model": model.to_dict(), "stats": {}, "transitions": {}}
    for stat in _stat_list(cfg):
        matrix = CurveMatrix.from_curves([c[stat] for c in sim_summary], grid)
        env = rank_envelope(matrix, cfg.alpha)
        observed = {
            sid: resample_curve(curves[stat], grid) for sid, curves in obs_summary.items()
        }
        verdicts = envelope_report(list(observed.values()), env)
        result["stats"][stat] = {
            "envelope": env.to_dict(),
            "observed": {k: [float(v) for v in vals] for k, vals in observed.items()},
            "report": dict(zip(observed.keys(), verdicts)),
        }

    sim_trans = [
        transition_curves(r.sequence, model.window, domain_end=end)
        for r in runs if len(r.sequence) >= 2
    ]
    obs_trans = {
        f"{s.subject_id}:{s.painting_id}": transition_curves(s, model.window, domain_end=end)
        for s in observed_seqs if len(s) >= 2
    }
    for a in range(4):
        for b in range(4):
            matrix = CurveMatrix.from_curves([t.curves[a][b] for t in sim_trans], grid)
            env = rank_envelope(matrix, cfg.alpha)
            observed = {
                k: resample_curve(t.curves[a][b], grid) for k, t in obs_trans.items()
            }
            verdicts = envelope_report(list(observed.values()), env)
            result["transitions"][f"{a + 1}->{b + 1}"] = {
                "envelope": env.to_dict(),
                "observed": {k: [float(v) for v in vals] for k, vals in observed.items()},
                "report": dict(zip(observed.keys(), verdicts)),
            }
    return result


def _coverage_panels_svg(group_result: dict, grid, title_prefix: str) -> str:
    panels = []
    for stat, block in group_result["stats"].items():
        env = block["envelope"]
        series = [(np.array(v), "#e6701b", 1.0) for v in block["observed"].values()]
        series.append((np.array(env["lower"]), "#000000", 1.5))
        series.append((np.array(env["upper"]), "#000000", 1.5))
        panels.append(dict(x=grid, series=series, title=f"{title_prefix} {stat}"))
    return panel_grid_svg(panels, ncols=len(panels) or 1)


def _transition_panels_svg(group_result: dict, grid, title_prefix: str) -> str:
    panels = []
    for a in range(4):
        for b in range(4):
            block = group_result["transitions"][f"{a + 1}->{b + 1}"]
            env = block["envelope"]
            series = [(np.array(v), "#e6701b", 0.8) for v in block["observed"].values()]
            series.append((np.array(env["lower"]), "#000000", 1.2))
            series.append((np.array(env["upper"]), "#000000", 1.2))
            panels.append(
                dict(x=grid, series=series, title=f"{title_prefix} {a + 1}->{b + 1}")
            )
    return panel_grid_svg(panels, ncols=4)


def cmd_envelope(cfg: PipelineConfig) -> None:
    out = _outdir(cfg)
    _require(cfg, "seed", "group")
    dataset, saccades, _ = _load_filtered(cfg)
    dataset = _single_painting(cfg, dataset)
    grid = default_grid(cfg.trial_length, cfg.grid_points)
    result = _group_envelopes(cfg, dataset, saccades, cfg.group, grid)
    payload = {"meta": _meta(cfg, "envelope"), "group": cfg.group, **result}
    _write_json(out / "envelope.json", payload)
    for stat, block in result["stats"].items():
        with open(out / f"envelope_{stat}.csv", "w", newline="") as fh:
            fh.write("time_ms,lower,upper\n")
            for t, lo, up in zip(grid, block["envelope"]["lower"], block["envelope"]["upper"]):
                fh.write(f"{float(t)!r},{float(lo)!r},{float(up)!r}\n")
    if cfg.svg:
        (out / "envelope_coverage.svg").write_text(
            _coverage_panels_svg(result, grid, cfg.group)
        )
        (out / "envelope_transitions.svg").write_text(
            _transition_panels_svg(result, grid, cfg.group)
        )


def cmd_report(cfg: PipelineConfig) -> None:
    """Model-based envelopes for both groups plus the intensity comparison."""
    out = _outdir(cfg)
    _require(cfg, "seed")
    dataset, saccades, ingest_report = _load_filtered(cfg)
    grid = default_grid(cfg.trial_length, cfg.grid_points)

    payload: dict = {
        "meta": _meta(cfg, "report"),
        "ingest": ingest_report.to_dict(),
        "groups": {},
        "intensity_comparison": {},
    }

    paintings = dataset.painting_ids()
    p_values = []
    for painting in paintings:
        sub = Dataset(
            window=dataset.window,
            sequences=[s for s in dataset.sequences if s.painting_id == painting],
            trial_length=dataset.trial_length,
        )
        res = permutation_test(
            sub, m=cfg.m, h1=cfg.h1, h2=cfg.h2, seed=cfg.seed,
            nx=cfg.nx, ny=cfg.ny, h_grid=cfg.h_grid,
        )
        payload["intensity_comparison"][painting] = res.to_dict()
        p_values.append(res.p)
        if cfg.svg:
            (out / f"report_log_ratio_{painting}.svg").write_text(
                heatmap_svg(res.r_grid, f"log ratio {painting} (p={res.p:.4g})", diverging=True)
            )
    if len(p_values) > 1:
        fisher = fisher_combine(p_values)
        payload["intensity_comparison"]["fisher"] = {
            "chi2": fisher.chi2, "df": fisher.df, "p": fisher.p
        }

    for group in ("novice", "non_novice"):
        if not dataset.by_group(group):
            continue
        result = _group_envelopes(cfg, dataset, saccades, group, grid)
        payload["groups"][group] = result
        if cfg.svg:
            (out / f"report_{group}_coverage.svg").write_text(
                _coverage_panels_svg(result, grid, group)
            )
            (out / f"report_{group}_transitions.svg").write_text(
                _transition_panels_svg(result, grid, group)
            )
    _write_json(out / "report.json", payload)


COMMANDS = {
    "ingest": cmd_ingest,
    "intensity": cmd_intensity,
    "residuals": cmd_residuals,
    "quadrat": cmd_quadrat,
    "shift": cmd_shift,
    "compare-intensity": cmd_compare_intensity,
    "fit": cmd_fit,
    "qq": cmd_qq,
    "simulate": cmd_simulate,
    "summaries": cmd_summaries,
    "envelope": cmd_envelope,
    "report": cmd_report,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixproc",
        description="Fixation-process analysis pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--input", help="fixation CSV")
        p.add_argument("--out", help="output directory")
        p.add_argument("--window", help="x_min,y_min,x_max,y_max")
        p.add_argument("--trial-length", dest="trial_length", type=float)
        p.add_argument("--min-fixation-ms", dest="min_fixation_ms", type=float)
        p.add_argument("--group", choices=("novice", "non_novice"))
        p.add_argument("--painting")
        p.add_argument("--h", type=float)
        p.add_argument("--h1", type=float)
        p.add_argument("--h2", type=float)
        p.add_argument("--h-grid", dest="h_grid", help="comma-separated bandwidths")
        p.add_argument("--interval-ms", dest="interval_ms", type=float)
        p.add_argument("--q", type=int)
        p.add_argument("--m", type=int, help="permutation count")
        p.add_argument("--seed", type=int)
        p.add_argument("--n-runs", dest="n_runs", type=int)
        p.add_argument("--radius", type=float)
        p.add_argument("--raster", type=float)
        p.add_argument("--p-long", dest="p_long", type=float)
        p.add_argument("--n-angles", dest="n_angles", type=int)
        p.add_argument("--nx", type=int)
        p.add_argument("--ny", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--grid-points", dest="grid_points", type=int)
        p.add_argument("--source", choices=("fixation_duration", "saccade_duration", "saccade_length"))
        p.add_argument("--stat", choices=STATS + ("all",))
        p.add_argument("--split", choices=("group", "interval"))
        p.add_argument("--no-svg", dest="svg", action="store_const", const=False)
        p.add_argument("--all-surface", dest="use_first_surface", action="store_const",
                       const=False, help="seed runs from the all-fixation surface")
    return parser


def _error_json(exc: Exception, code: int) -> str:
    return json.dumps(
        {"error": type(exc).__name__, "message": str(exc), "exit_code": code},
        sort_keys=True,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if overrides.get("window") is not None:
        try:
            overrides["window"] = tuple(float(v) for v in overrides["window"].split(","))
        except ValueError:
            print(_error_json(ConfigError("bad --window"), EXIT_CONFIG), file=sys.stderr)
            return EXIT_CONFIG
    if overrides.get("h_grid") is not None:
        try:
            overrides["h_grid"] = tuple(float(v) for v in overrides["h_grid"].split(","))
        except ValueError:
            print(_error_json(ConfigError("bad --h-grid"), EXIT_CONFIG), file=sys.stderr)
            return EXIT_CONFIG
    try:
        cfg = _load_config(args.config, overrides)
        COMMANDS[args.command](cfg)
        return EXIT_OK
    except ConfigError as exc:
        print(_error_json(exc, EXIT_CONFIG), file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(_error_json(exc, EXIT_DATA), file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(_error_json(exc, EXIT_DATA), file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(_error_json(exc, EXIT_NUMERIC), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
