"""Seeded repetition harness: mask, solve, score, aggregate.

Each repetition r derives its own 63-bit seed from the base seed through a
dedicated generator substream, then uses it for both the masks and the
solver's anchor selection. Ablation variants are declared as SolverConfig
flag overrides, so they compose freely.
"""

import json
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..graphs import bkhk_anchors, build_bipartite
from ..rng import STREAM_EXPERIMENT, make_generator
from ..solver import (
    RegularizerB,
    SolverConfig,
    admm_solve,
    one_hot_labels,
    predict,
    update_labels,
)
from .masks import MaskSpec, generate_masks, missing_per_view
from .metrics import metrics

STANDARD_VARIANTS = {
    "full": {},
    "wo_tv": {"freeze_alignment": True},
    "wo_alpha": {"freeze_weights": True},
    "wo_ti": {"skip_imputation": True},
}

_METRIC_KEYS = ("acc", "prec_macro", "rec_macro", "f1_macro", "prec_micro", "f1_micro")


def rep_seed(base_seed, r):
    """63-bit repetition seed drawn from the experiment substream."""
    rng = make_generator(base_seed, STREAM_EXPERIMENT, index=r)
    return int(rng.integers(0, 2**63))


def baseline_label_propagation(
    views, y, labeled_idx, missing, m=16, k=7, seed=0, b_labeled=100.0, n_classes=None
):
    """Label propagation on the unweighted mean of the per-view graphs.

    Per-view bipartite rows are averaged with equal weight over V disjoint
    anchor blocks, keeping rows stochastic; a sample's row in a view it is
    missing from stays at the uninformative uniform 1/m, the same convention
    the solver starts from before imputation. No imputation, no view
    weighting, no alignment: the control all harness comparisons run against.
    """
    views = [np.asarray(X, dtype=np.float64) for X in views]
    y = np.asarray(y, dtype=np.int64)
    V = len(views)
    n = views[0].shape[0]
    c = int(n_classes) if n_classes is not None else int(y.max()) + 1

    observed = np.full(n, V, dtype=np.int64)
    for idx in missing:
        observed[np.asarray(idx, dtype=np.int64)] -= 1
    if np.any(observed < 1):
        raise ValueError("every sample must be present in at least one view")

    P_cat = np.zeros((n, V * m))
    for v, X in enumerate(views):
        omega = np.asarray(missing[v], dtype=np.int64)
        present = np.setdiff1d(np.arange(n), omega)
        anchors = bkhk_anchors(X[present], m, seed=seed, index=v)
        Z = np.full((n, m), 1.0 / m)
        Z[present] = build_bipartite(X[present], anchors, k)
        P_cat[:, v * m : (v + 1) * m] = Z / V

    Y = one_hot_labels(y, labeled_idx, c)
    F, _ = update_labels(P_cat, RegularizerB(b_labeled=b_labeled), Y)
    return predict(F)


def _aggregate(records):
    ok = [r for r in records if r["error"] is None]
    agg = {}
    for key in _METRIC_KEYS:
        values = np.array([r["metrics"][key] for r in ok], dtype=np.float64)
        agg[key] = {
            "mean": float(values.mean()) if values.size else float("nan"),
            "std": float(values.std()) if values.size else float("nan"),
        }
    return agg


def run_experiment(
    container,
    vmr,
    lar,
    n_reps,
    solver_config=None,
    variants=None,
    base_seed=0,
    jsonl_path=None,
):
    """K seeded repetitions of mask -> solve -> score, per variant.

    Returns a results record with one block per variant: the per-repetition
    records and mean/std aggregates for every metric. Solver errors inside a
    repetition are captured on its record and counted in failed_reps instead
    of aborting the run.
    """
    solver_config = solver_config or SolverConfig()
    variants = dict(variants) if variants is not None else {"full": {}}

    blocks = {name: {"records": [], "failed_reps": 0} for name in variants}
    all_idx = np.arange(container.n)
    for r in range(n_reps):
        seed_r = rep_seed(base_seed, r)
        spec = MaskSpec(vmr=vmr, lar=lar, seed=seed_r)
        missing, labeled = generate_masks(container, spec)
        per_view = missing_per_view(missing, container.V)
        unlabeled = np.setdiff1d(all_idx, labeled)
        for name, flags in variants.items():
            config = replace(solver_config, seed=seed_r, **flags)
            record = {
                "type": "rep",
                "variant": name,
                "rep": r,
                "seed": seed_r,
                "vmr": vmr,
                "lar": lar,
                "error": None,
                "metrics": None,
                "converged": None,
                "n_iter": None,
            }
            try:
                result = admm_solve(
                    container.views,
                    container.labels.astype(np.int64),
                    labeled,
                    per_view,
                    config,
                    n_classes=container.c,
                )
                pred = predict(result.F, unlabeled)
                record["metrics"] = metrics(
                    pred, container.labels[unlabeled], container.c
                )
                record["converged"] = result.converged
                record["n_iter"] = result.n_iter
            except (ValueError, np.linalg.LinAlgError) as exc:
                record["error"] = f"{type(exc).__name__}: {exc}"
                blocks[name]["failed_reps"] += 1
            blocks[name]["records"].append(record)

    for name, block in blocks.items():
        block["aggregate"] = _aggregate(block["records"])

    out = {
        "dataset": container.name,
        "vmr": vmr,
        "lar": lar,
        "n_reps": n_reps,
        "base_seed": base_seed,
        "variants": blocks,
    }
    if jsonl_path is not None:
        with open(Path(jsonl_path), "w") as fh:
            for name, block in blocks.items():
                for record in block["records"]:
                    fh.write(json.dumps(record) + "\n")
                fh.write(
                    json.dumps(
                        {
                            "type": "aggregate",
                            "variant": name,
                            "dataset": container.name,
                            "vmr": vmr,
                            "lar": lar,
                            "n_reps": n_reps,
                            "failed_reps": block["failed_reps"],
                            "aggregate": block["aggregate"],
                        }
                    )
                    + "\n"
                )
    return out
