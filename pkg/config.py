# config.py - JSON configuration with environment overrides

import copy
import json
import math
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from asymptotics import UNDERFLOW_FLOOR, EpsGrid, ValuationSettings
from corpus import CORPUS_VERSION
from errors import ConfigError
from genfun import Numerics, SupSettings
from mollifier import MollifierParams
from quadrature import QuadratureSettings
from scalars import SupportSettings

DEFAULTS = {
    "eps_grid": {"base": 2, "k_min": 6, "k_max": 40},
    "valuation": {"q_max": 10, "residual_tol": 0.25, "n_max": 12, "cancellation_tol": 1e-8},
    "quadrature": {"order": 16, "panels": 64, "refine_tol": 1e-9, "abs_tol": 1e-16},
    "mollifier": {
        "r_in": 1.0,
        "r_out": 2.0,
        "fft_size": 65536,
        "radius": 40.0,
        "sharpness": 2.8,
        "skew": 1.0,
    },
    "sup": {"points_per_axis": 2048, "refine_top": 5, "global_radius": 50.0},
    "support": {"cluster_radius": 1e-3, "segments": 4, "samples_per_level": 128},
    "corpus_version": CORPUS_VERSION,
    "output": {"path": "report.json", "include_timings": False},
    "jobs": 1,
}

ENV_OVERRIDES = {
    "COLOMBEAU_QMAX": ("valuation", "q_max", float),
    "COLOMBEAU_EPS_KMAX": ("eps_grid", "k_max", int),
    "COLOMBEAU_JOBS": (None, "jobs", int),
}


@dataclass(frozen=True)
class LabSettings:
    numerics: Numerics
    mollifier: MollifierParams
    corpus_version: str
    output_path: str
    include_timings: bool
    jobs: int


def _merge(base, extra, path, problems):
    for key, value in extra.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            problems.append(f"unknown key '{where}'")
            continue
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                problems.append(f"'{where}' must be an object")
                continue
            _merge(base[key], value, where, problems)
        else:
            base[key] = value


def _set(config, section, key, value):
    if section is None:
        config[key] = value
    else:
        config[section][key] = value


def load_config(path=None, overrides=None):
    """Load configuration: defaults, then JSON file, then environment, then ``overrides``.

    ``overrides`` maps (section, key) or key to a value; None values are ignored.
    """
    load_dotenv()

    config = copy.deepcopy(DEFAULTS)
    problems = []

    path = path or os.getenv("COLOMBEAU_CONFIG")
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Invalid configuration: file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid configuration: {path} is not valid JSON ({e})")
        if not isinstance(data, dict):
            raise ConfigError(f"Invalid configuration: {path} must hold a JSON object")
        _merge(config, data, "", problems)

    for var, (section, key, kind) in ENV_OVERRIDES.items():
        raw = os.getenv(var)
        if raw is None or raw.strip() == "":
            continue
        try:
            _set(config, section, key, kind(raw))
        except ValueError:
            problems.append(f"environment variable {var}={raw!r} is not a valid {kind.__name__}")

    for target, value in (overrides or {}).items():
        if value is None:
            continue
        section, key = target if isinstance(target, tuple) else (None, target)
        _set(config, section, key, value)

    problems.extend(validate_config(config))
    if problems:
        raise ConfigError(f"Invalid configuration: {'; '.join(problems)}")

    return config


def _number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _integer(value):
    return isinstance(value, int) and not isinstance(value, bool)


def validate_config(config):
    """Return a list of problems; empty when the configuration is usable."""
    problems = []

    grid = config["eps_grid"]
    if not _number(grid["base"]) or grid["base"] <= 1:
        problems.append("eps_grid.base must be a number > 1")
    if not _integer(grid["k_min"]) or not _integer(grid["k_max"]):
        problems.append("eps_grid.k_min and eps_grid.k_max must be integers")
    elif grid["k_min"] < 0 or grid["k_min"] >= grid["k_max"]:
        problems.append("eps_grid requires 0 <= k_min < k_max")
    elif _number(grid["base"]) and grid["base"] > 1:
        if float(grid["base"]) ** (-grid["k_max"]) <= UNDERFLOW_FLOOR:
            problems.append("eps_grid.k_max puts base^-k_max below the underflow floor")
        elif grid["k_max"] - grid["k_min"] + 1 < 8:
            problems.append("eps_grid must hold at least 8 points")

    val = config["valuation"]
    if not _number(val["q_max"]) or val["q_max"] <= 0:
        problems.append("valuation.q_max must be positive")
    if not _number(val["residual_tol"]) or val["residual_tol"] <= 0:
        problems.append("valuation.residual_tol must be positive")
    if not _number(val["n_max"]) or val["n_max"] <= 0:
        problems.append("valuation.n_max must be positive")
    if not _number(val["cancellation_tol"]) or not 0 <= val["cancellation_tol"] < 1:
        problems.append("valuation.cancellation_tol must lie in [0, 1)")

    quad = config["quadrature"]
    if not _integer(quad["order"]) or not 2 <= quad["order"] <= 64:
        problems.append("quadrature.order must be an integer in [2, 64]")
    if not _integer(quad["panels"]) or quad["panels"] < 1:
        problems.append("quadrature.panels must be a positive integer")
    if not _number(quad["refine_tol"]) or quad["refine_tol"] <= 0:
        problems.append("quadrature.refine_tol must be positive")
    if not _number(quad["abs_tol"]) or quad["abs_tol"] < 0:
        problems.append("quadrature.abs_tol must be non-negative")

    moll = config["mollifier"]
    if not all(_number(moll[k]) for k in ("r_in", "r_out", "radius", "sharpness", "skew")):
        problems.append("mollifier parameters must be numbers")
    else:
        if not 0 < moll["r_in"] < moll["r_out"]:
            problems.append("mollifier requires 0 < r_in < r_out")
        if moll["radius"] <= 0 or moll["sharpness"] <= 0:
            problems.append("mollifier.radius and mollifier.sharpness must be positive")
    size = moll["fft_size"]
    if not _integer(size) or size < 4096 or size & (size - 1):
        problems.append("mollifier.fft_size must be a power of two >= 4096")

    sup = config["sup"]
    if not _integer(sup["points_per_axis"]) or sup["points_per_axis"] < 16:
        problems.append("sup.points_per_axis must be an integer >= 16")
    if not _integer(sup["refine_top"]) or sup["refine_top"] < 0:
        problems.append("sup.refine_top must be a non-negative integer")
    if not _number(sup["global_radius"]) or sup["global_radius"] <= 5:
        problems.append("sup.global_radius must be a number > 5")

    supp = config["support"]
    if not _number(supp["cluster_radius"]) or supp["cluster_radius"] <= 0:
        problems.append("support.cluster_radius must be positive")
    if not _integer(supp["segments"]) or supp["segments"] < 1:
        problems.append("support.segments must be a positive integer")
    if not _integer(supp["samples_per_level"]) or supp["samples_per_level"] < 1:
        problems.append("support.samples_per_level must be a positive integer")

    if config["corpus_version"] != CORPUS_VERSION:
        problems.append(f"corpus_version {config['corpus_version']!r} is not available (have {CORPUS_VERSION!r})")

    out = config["output"]
    if not isinstance(out["path"], str) or not out["path"]:
        problems.append("output.path must be a non-empty string")
    if not isinstance(out["include_timings"], bool):
        problems.append("output.include_timings must be true or false")

    if not _integer(config["jobs"]) or config["jobs"] < 1:
        problems.append("jobs must be a positive integer")

    return problems


def settings_from_config(config):
    """Turn a validated configuration dict into the frozen settings the numeric modules take."""
    grid = config["eps_grid"]
    val = config["valuation"]
    quad = config["quadrature"]
    moll = config["mollifier"]
    sup = config["sup"]
    supp = config["support"]

    valuation = ValuationSettings(
        grid=EpsGrid(base=float(grid["base"]), k_min=int(grid["k_min"]), k_max=int(grid["k_max"])),
        q_max=float(val["q_max"]),
        residual_tol=float(val["residual_tol"]),
        n_max=float(val["n_max"]),
        cancellation_tol=float(val["cancellation_tol"]),
    )
    numerics = Numerics(
        valuation=valuation,
        quadrature=QuadratureSettings(order=int(quad["order"]), panels=int(quad["panels"]),
                                      refine_tol=float(quad["refine_tol"]), abs_tol=float(quad["abs_tol"])),
        sup=SupSettings(points_per_axis=int(sup["points_per_axis"]), refine_top=int(sup["refine_top"]),
                        global_radius=float(sup["global_radius"])),
        support=SupportSettings(cluster_radius=float(supp["cluster_radius"]), segments=int(supp["segments"]),
                                samples_per_level=int(supp["samples_per_level"])),
    )
    mollifier = MollifierParams(
        r_in=float(moll["r_in"]),
        r_out=float(moll["r_out"]),
        fft_size=int(moll["fft_size"]),
        radius=float(moll["radius"]),
        sharpness=float(moll["sharpness"]),
        skew=float(moll["skew"]),
    )
    return LabSettings(
        numerics=numerics,
        mollifier=mollifier,
        corpus_version=config["corpus_version"],
        output_path=config["output"]["path"],
        include_timings=config["output"]["include_timings"],
        jobs=int(config["jobs"]),
    )
