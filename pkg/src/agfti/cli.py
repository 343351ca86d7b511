"""Command line front end.

Only click/json/os are imported at module level on purpose: the --threads
flag (or the AGFTI_THREADS env var) has to land in the BLAS thread-count
environment variables before numpy is first imported, so every command body
imports the library lazily after _set_threads has run.
"""

import json
import os

import click

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _set_threads(threads):
    """Export the BLAS thread cap; the CLI flag wins over AGFTI_THREADS."""
    if threads is None:
        env = os.environ.get("AGFTI_THREADS", "").strip()
        threads = int(env) if env else None
    if threads is not None:
        if threads < 1:
            raise click.BadParameter("thread count must be >= 1")
        for var in _THREAD_VARS:
            os.environ[var] = str(threads)


def _load_container(path):
    from .harness import load_dataset, load_dataset_csv

    if os.path.isdir(path):
        return load_dataset_csv(path)
    return load_dataset(path)


def _solver_options(fn):
    decorators = [
        click.option("--lambda", "lam", type=float, default=None,
                     help="fusion weight; defaults to V^2"),
        click.option("--beta-lambda", "beta", type=float, default=4.0,
                     show_default=True, help="fused-graph ridge weight"),
        click.option("--rho", type=float, default=100.0, show_default=True,
                     help="tensor nuclear norm weight"),
        click.option("--anchors", "n_anchors", type=int, default=16,
                     show_default=True, help="anchors per view (power of two)"),
        click.option("--neighbors", "k_neighbors", type=int, default=7,
                     show_default=True, help="anchor neighbours per sample"),
        click.option("--b-labeled", type=float, default=100.0,
                     show_default=True, help="fitting weight on labeled samples"),
        click.option("--tol", type=float, default=1e-5, show_default=True,
                     help="outer stopping tolerance"),
        click.option("--max-iters", "max_outer_iters", type=int, default=50,
                     show_default=True, help="outer iteration cap"),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--threads", type=int, default=None,
                     help="BLAS thread cap; overrides AGFTI_THREADS"),
    ]
    for dec in reversed(decorators):
        fn = dec(fn)
    return fn


def _make_config(kwargs):
    from .solver import SolverConfig

    return SolverConfig(
        n_anchors=kwargs["n_anchors"],
        k_neighbors=kwargs["k_neighbors"],
        lam=kwargs["lam"],
        beta=kwargs["beta"],
        rho=kwargs["rho"],
        b_labeled=kwargs["b_labeled"],
        tol=kwargs["tol"],
        max_outer_iters=kwargs["max_outer_iters"],
        seed=kwargs["seed"],
    )


def _solve_from_files(container_path, mask_path, kwargs):
    import numpy as np

    from .harness import load_mask, missing_per_view
    from .solver import admm_solve

    container = _load_container(container_path)
    _, missing, labeled = load_mask(mask_path)
    per_view = missing_per_view(missing, container.V)
    config = _make_config(kwargs)
    result = admm_solve(
        container.views, container.labels, labeled, per_view, config,
        n_classes=container.c,
    )
    unlabeled = np.setdiff1d(np.arange(container.n), labeled)
    return container, labeled, unlabeled, result


def _echo_json(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        click.echo(f"wrote {out}")


@click.group()
def main():
    """Anchor-graph fusion with tensorial imputation."""


@main.command()
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n-per-class", type=int, default=100, show_default=True)
@click.option("--views", "V", type=int, default=2, show_default=True)
@click.option("--classes", "c", type=int, default=3, show_default=True)
@click.option("--vacuum", type=float, default=0.55, show_default=True,
              help="fraction of each segment thinned to bridges")
@click.option("--noise", type=float, default=0.2, show_default=True)
@click.option("--bridge", type=float, default=0.04, show_default=True)
@click.option("--csv", "as_csv", is_flag=True,
              help="write a CSV directory instead of the binary container")
@click.option("--threads", type=int, default=None)
def synth(out, seed, n_per_class, V, c, vacuum, noise, bridge, as_csv, threads):
    """Generate a synthetic sub-cluster-problem container."""
    _set_threads(threads)
    from .harness import save_dataset, save_dataset_csv, synth_scp

    container = synth_scp(
        seed, n_per_class=n_per_class, V=V, c=c,
        vacuum_width=vacuum, noise=noise, bridge_frac=bridge,
    )
    if as_csv:
        save_dataset_csv(container, out)
    else:
        save_dataset(container, out)
    click.echo(f"wrote {out}: n={container.n} V={container.V} c={container.c}")


@main.command()
@click.argument("container_path", type=click.Path(exists=True))
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--vmr", type=float, required=True, help="view missing ratio")
@click.option("--lar", type=float, required=True, help="label annotation ratio")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=None)
def mask(container_path, out, vmr, lar, seed, threads):
    """Draw missing-view and label masks for a container."""
    _set_threads(threads)
    from .harness import MaskSpec, generate_masks, save_mask

    container = _load_container(container_path)
    spec = MaskSpec(vmr=vmr, lar=lar, seed=seed)
    missing, labeled = generate_masks(container, spec)
    save_mask(out, spec, missing, labeled)
    n_incomplete = sum(1 for views in missing if views)
    click.echo(
        f"wrote {out}: {n_incomplete}/{container.n} samples incomplete, "
        f"{len(labeled)} labeled"
    )


@main.command()
@click.argument("container_path", type=click.Path(exists=True))
@click.argument("mask_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the report here instead of stdout")
@click.option("--predictions", "pred_path", type=click.Path(dir_okay=False),
              default=None, help="also dump per-sample predictions as JSON")
@_solver_options
def train(container_path, mask_path, out, pred_path, threads, **kwargs):
    """Solve once on a container + mask and report metrics."""
    _set_threads(threads)
    from .harness import metrics
    from .solver import predict

    container, labeled, unlabeled, result = _solve_from_files(
        container_path, mask_path, kwargs
    )
    pred = predict(result.F)
    scores = metrics(pred[unlabeled], container.labels[unlabeled], container.c)
    report = {
        "dataset": container.name,
        "n": container.n,
        "labeled": int(labeled.size),
        "metrics": scores,
        "converged": result.converged,
        "n_iter": result.n_iter,
        "lambda": result.lam,
        "alpha": [float(a) for a in result.alpha],
    }
    _echo_json(report, out)
    if pred_path is not None:
        with open(pred_path, "w") as fh:
            json.dump({"predictions": [int(p) for p in pred]}, fh)
        click.echo(f"wrote {pred_path}")


@main.command("eval")
@click.argument("container_path", type=click.Path(exists=True))
@click.option("--vmr", type=float, required=True)
@click.option("--lar", type=float, required=True)
@click.option("--reps", type=int, default=10, show_default=True)
@click.option("--base-seed", type=int, default=0, show_default=True)
@click.option("--jsonl", type=click.Path(dir_okay=False), default=None,
              help="append per-repetition and aggregate records here")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_solver_options
def eval_cmd(container_path, vmr, lar, reps, base_seed, jsonl, out, threads,
             **kwargs):
    """Run K seeded repetitions of mask -> solve -> score."""
    _set_threads(threads)
    from .harness import run_experiment

    container = _load_container(container_path)
    results = run_experiment(
        container, vmr, lar, reps,
        solver_config=_make_config(kwargs),
        base_seed=base_seed, jsonl_path=jsonl,
    )
    block = results["variants"]["full"]
    report = {
        "dataset": container.name,
        "vmr": vmr,
        "lar": lar,
        "reps": reps,
        "failed_reps": block["failed_reps"],
        "aggregate": block["aggregate"],
    }
    _echo_json(report, out)


@main.command()
@click.argument("container_path", type=click.Path(exists=True))
@click.option("--vmr", type=float, required=True)
@click.option("--lar", type=float, required=True)
@click.option("--reps", type=int, default=10, show_default=True)
@click.option("--base-seed", type=int, default=0, show_default=True)
@click.option("--variants", default="full,wo_tv,wo_alpha,wo_ti",
              show_default=True, help="comma-separated variant names")
@click.option("--jsonl", type=click.Path(dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_solver_options
def ablate(container_path, vmr, lar, reps, base_seed, variants, jsonl, out,
           threads, **kwargs):
    """Compare ablation variants under the repetition harness."""
    _set_threads(threads)
    from .harness import run_experiment
    from .harness.experiment import STANDARD_VARIANTS

    chosen = {}
    for name in (v.strip() for v in variants.split(",")):
        if not name:
            continue
        if name not in STANDARD_VARIANTS:
            known = ", ".join(sorted(STANDARD_VARIANTS))
            raise click.BadParameter(f"unknown variant {name!r}; known: {known}")
        chosen[name] = STANDARD_VARIANTS[name]

    container = _load_container(container_path)
    results = run_experiment(
        container, vmr, lar, reps,
        solver_config=_make_config(kwargs),
        variants=chosen, base_seed=base_seed, jsonl_path=jsonl,
    )
    report = {
        "dataset": container.name,
        "vmr": vmr,
        "lar": lar,
        "reps": reps,
        "variants": {
            name: {
                "failed_reps": block["failed_reps"],
                "aggregate": block["aggregate"],
            }
            for name, block in results["variants"].items()
        },
    }
    _echo_json(report, out)


@main.command()
@click.argument("container_path", type=click.Path(exists=True))
@click.argument("mask_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write JSON lines here instead of stdout")
@_solver_options
def diag(container_path, mask_path, out, threads, **kwargs):
    """Dump per-iteration solver diagnostics as JSON lines."""
    _set_threads(threads)
    _, _, _, result = _solve_from_files(container_path, mask_path, kwargs)
    lines = [json.dumps(row, sort_keys=True) for row in result.diagnostics]
    summary = json.dumps({
        "converged": result.converged,
        "n_iter": result.n_iter,
        "alpha": [float(a) for a in result.alpha],
    }, sort_keys=True)
    if out is None:
        for line in lines:
            click.echo(line)
        click.echo(summary)
    else:
        with open(out, "w") as fh:
            fh.write("\n".join(lines + [summary]) + "\n")
        click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
