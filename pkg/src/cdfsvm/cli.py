"""Command-line surface: synth | fit | predict | cv | bench-bayes | bench-uci.

Every flag has a matching key in an optional flat key=value config file
(--config); explicit flags override file values. Commands are deterministic
given their full flag set including the seed. Results go to stdout and the
output files; diagnostics go to stderr; the exit code is 0 only when all
requested work completed.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from .bench import (bayes_table_text, run_bayes_benchmark, run_uci_benchmark,
                    uci_table_text, write_bayes_csv, write_uci_csv)
from .core import decide, subset
from .datagen import (GaussianSpec2D, Robustness1DSpec, bayes_boundary_2d,
                      gen_gaussian_2d, load_csv, sample_gaussian_2d,
                      sample_robustness_1d, save_csv)
from .evaluation import evaluate, format_report_table, reports_to_csv
from .modelsel import (GridSpec, METHODS, WeightConfig, fit_full, grid_search,
                       kfold_split, rows_to_csv)
from .solvers import SolverError, load_model, predict, save_model

_INDICATORS = ("acc", "vac", "both")
_MU_CHOICES = ("empirical", "uniform", "gaussian", "point-mass")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _staged(path: str, writer) -> None:
    """Run a file writer against a temp path, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _float_list(text: str) -> tuple[float, ...]:
    values = tuple(float(tok) for tok in str(text).split(",") if tok.strip())
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated float list")
    return values


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}: line {lineno}: expected key=value")
            key, _, value = stripped.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge(defaults: dict, converters: dict, ns: argparse.Namespace) -> argparse.Namespace:
    merged = dict(defaults)
    explicit = vars(ns)
    config_path = explicit.pop("config", None)
    if config_path:
        for key, raw in _load_config(config_path).items():
            if key not in merged:
                raise ValueError(f"unknown config key {key!r}")
            conv = converters.get(key, str)
            merged[key] = conv(raw)
    merged.update(explicit)
    return argparse.Namespace(**merged)


def _weight_config(ns) -> WeightConfig:
    return WeightConfig(g_kind=ns.g_kernel,
                        mu_kind=ns.mu.replace("-", "_"),
                        combine=ns.combine,
                        sigma_eval=ns.sigma_eval)


def _grid_spec(ns, indicator: str) -> GridSpec:
    return GridSpec(gammas=ns.gammas, deltas=ns.deltas, epsilons=ns.epsilons,
                    sigmas=ns.sigmas, folds=ns.folds, indicator=indicator,
                    seed=ns.seed)


def _provenance(ns, keys) -> str:
    return " ".join(f"{k}={getattr(ns, k)}" for k in keys)


# ---------------------------------------------------------------------------
# subcommands

_SYNTH_DEFAULTS = dict(kind="gauss2d", n=200, seed=0, out="dataset.csv")
_SYNTH_CONVERTERS = dict(kind=str, n=int, seed=int, out=str)


def _cmd_synth(ns) -> int:
    if ns.kind == "gauss2d":
        spec = GaussianSpec2D(n=ns.n, seed=ns.seed)
        raw, labels = sample_gaussian_2d(spec)
        line = bayes_boundary_2d(spec)
        info = f"Bayes boundary: x2 = {line.slope:g}*x1 + {line.intercept:g}"
    elif ns.kind == "robust1d":
        spec = Robustness1DSpec(n=ns.n, seed=ns.seed)
        raw, labels = sample_robustness_1d(spec)
        coef = (spec.center_neg - spec.center_pos) / spec.var
        shift = (spec.center_pos**2 - spec.center_neg**2) / (2.0 * spec.var)
        if shift == 0.0:
            info = f"Bayes posterior: P(y=1|x) = 1/(1+exp({coef:g}*x))"
        else:
            info = f"Bayes posterior: P(y=1|x) = 1/(1+exp({coef:g}*x + {-shift:g}))"
    else:
        raise ValueError(f"unknown synthetic kind {ns.kind!r}")
    _staged(ns.out, lambda tmp: save_csv(tmp, raw, labels))
    print(f"wrote {ns.out} ({raw.shape[0]} rows, {raw.shape[1]} features)")
    print(info)
    return 0


_FIT_DEFAULTS = dict(dataset="", method="eps-l1vsvm", kernel="rbf", gamma=1.0,
                     delta=1.0, epsilon=0.25, sigma=1.0, g_kernel="gaussian",
                     mu="empirical", combine="product", sigma_eval=1.0,
                     test_file="", train_frac=0.8, seed=0, out_dir=".",
                     label_column=-1, positive_label="")
_FIT_CONVERTERS = dict(dataset=str, method=str, kernel=str, gamma=float,
                       delta=float, epsilon=float, sigma=float, g_kernel=str,
                       mu=str, combine=str, sigma_eval=float, test_file=str,
                       train_frac=float, seed=int, out_dir=str,
                       label_column=int, positive_label=str)


def _split_train_test(data, ns):
    if ns.test_file:
        test = load_csv(ns.test_file, label_column=ns.label_column,
                        positive_label=ns.positive_label or None,
                        scaler=data.scaler)
        return data, test
    if not 0.0 < ns.train_frac < 1.0:
        raise ValueError("train_frac must lie strictly between 0 and 1")
    folds = max(2, round(1.0 / (1.0 - ns.train_frac)))
    train_idx, test_idx = kfold_split(data.m, folds, ns.seed, labels=data.labels)[0]
    return subset(data, train_idx), subset(data, test_idx)


def _cmd_fit(ns) -> int:
    if ns.method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    data = load_csv(ns.dataset, label_column=ns.label_column,
                    positive_label=ns.positive_label or None)
    train, test = _split_train_test(data, ns)
    wcfg = _weight_config(ns)
    params = dict(gamma=ns.gamma, delta=ns.delta, epsilon=ns.epsilon,
                  sigma=ns.sigma)
    model = fit_full(train, ns.method, params, ns.kernel, wcfg)
    pred = decide(predict(model, test.features))
    # test rows keep their position in the full sample only for the split
    # path; with an external test file their weights are computed directly
    # against the combined reference sample
    if ns.test_file:
        refs = np.vstack([train.features, test.features])
        v_t = wcfg.weights_for(test.features, refs).values
    else:
        v_eval = wcfg.weights_for(data.features, data.features).values
        folds = max(2, round(1.0 / (1.0 - ns.train_frac)))
        _, test_idx = kfold_split(data.m, folds, ns.seed, labels=data.labels)[0]
        v_t = v_eval[test_idx]
    provenance = f"g={ns.g_kernel} mu={ns.mu} sigma_eval={ns.sigma_eval}"
    if np.any(v_t <= 0.0):
        # vanishing step-kernel weights: Vac is undefined, report plain Acc
        v_t, provenance = None, provenance + " (degenerate weights; vac=acc)"
    report = evaluate(test.labels, pred, v_t, v_provenance=provenance)
    os.makedirs(ns.out_dir, exist_ok=True)
    model_path = os.path.join(ns.out_dir, f"model-{ns.method}.json")
    report_path = os.path.join(ns.out_dir, f"report-{ns.method}.csv")
    _staged(model_path, lambda tmp: save_model(model, tmp))
    provenance = _provenance(ns, ("dataset", "method", "kernel", "gamma", "delta",
                                  "epsilon", "sigma", "g_kernel", "mu", "combine",
                                  "seed"))
    _staged(report_path,
            lambda tmp: reports_to_csv({ns.method: report}, tmp, provenance))
    print(format_report_table({ns.method: report}))
    print(f"model: {model_path}")
    print(f"report: {report_path}")
    return 0


_PREDICT_DEFAULTS = dict(model="", dataset="", out="predictions.csv",
                         label_column=-1, positive_label="")
_PREDICT_CONVERTERS = dict(model=str, dataset=str, out=str, label_column=int,
                           positive_label=str)


def _cmd_predict(ns) -> int:
    model = load_model(ns.model)
    data = load_csv(ns.dataset, label_column=ns.label_column,
                    positive_label=ns.positive_label or None,
                    scaler=model.scaler)
    scores = predict(model, data.features)
    labels = decide(scores)
    lines = ["index,score,label"]
    lines += [f"{i},{float(s)!r},{int(l)}"
              for i, (s, l) in enumerate(zip(scores, labels))]
    _atomic_write(ns.out, "\n".join(lines) + "\n")
    print(f"wrote {ns.out} ({len(labels)} rows)")
    return 0


_CV_DEFAULTS = dict(dataset="", method="eps-l1vsvm", kernel="rbf",
                    indicator="acc", folds=10, seed=0,
                    gammas=GridSpec().gammas, deltas=GridSpec().deltas,
                    epsilons=GridSpec().epsilons, sigmas=GridSpec().sigmas,
                    g_kernel="gaussian", mu="empirical", combine="product",
                    sigma_eval=1.0, out_dir=".", label_column=-1,
                    positive_label="")
_CV_CONVERTERS = dict(dataset=str, method=str, kernel=str, indicator=str,
                      folds=int, seed=int, gammas=_float_list,
                      deltas=_float_list, epsilons=_float_list,
                      sigmas=_float_list, g_kernel=str, mu=str, combine=str,
                      sigma_eval=float, out_dir=str, label_column=int,
                      positive_label=str)


def _cmd_cv(ns) -> int:
    if ns.indicator not in ("acc", "vac"):
        raise ValueError("cv indicator must be acc or vac")
    data = load_csv(ns.dataset, label_column=ns.label_column,
                    positive_label=ns.positive_label or None)
    result = grid_search(data, ns.method, _grid_spec(ns, ns.indicator),
                         ns.kernel, _weight_config(ns))
    os.makedirs(ns.out_dir, exist_ok=True)
    provenance = _provenance(ns, ("dataset", "method", "kernel", "indicator",
                                  "folds", "seed", "gammas", "deltas",
                                  "epsilons", "sigmas", "g_kernel", "mu",
                                  "combine", "sigma_eval"))
    table_path = os.path.join(ns.out_dir, "cv-table.csv")
    _staged(table_path, lambda tmp: rows_to_csv(result.rows, tmp, provenance))
    best_path = os.path.join(ns.out_dir, "cv-best.txt")
    best_lines = [f"# {provenance}"]
    best_lines += [f"{key}={value}" for key, value in sorted(result.best.items())
                   if value is not None]
    best_lines.append(f"cv_{result.indicator}={result.score!r}")
    _atomic_write(best_path, "\n".join(best_lines) + "\n")
    shown = {k: v for k, v in result.best.items() if v is not None}
    print(f"best {shown} with CV {result.indicator} = {result.score:.4f}")
    print(f"table: {table_path}")
    print(f"best config: {best_path}")
    return 0


_BENCH_BAYES_DEFAULTS = dict(n=200, repetitions=100, methods="eps-l1vsvm,lssvm",
                             indicator="acc", seed=0, folds=10,
                             gammas=GridSpec().gammas, deltas=(1.0,),
                             epsilons=GridSpec().epsilons,
                             sigmas=GridSpec().sigmas, g_kernel="gaussian",
                             mu="uniform", combine="product", sigma_eval=1.0,
                             out_dir=".")
_BENCH_BAYES_CONVERTERS = dict(n=int, repetitions=int, methods=str,
                               indicator=str, seed=int, folds=int,
                               gammas=_float_list, deltas=_float_list,
                               epsilons=_float_list, sigmas=_float_list,
                               g_kernel=str, mu=str, combine=str,
                               sigma_eval=float, out_dir=str)


def _cmd_bench_bayes(ns) -> int:
    methods = tuple(tok.strip() for tok in ns.methods.split(",") if tok.strip())
    for method in methods:
        if method not in METHODS + ("bayes",):
            raise ValueError(f"unknown method {method!r}")
    indicators = ("acc", "vac") if ns.indicator == "both" else (ns.indicator,)
    columns = run_bayes_benchmark(ns.n, ns.repetitions, methods,
                                  _grid_spec(ns, indicators[0]),
                                  wcfg=_weight_config(ns),
                                  indicators=indicators, seed=ns.seed)
    os.makedirs(ns.out_dir, exist_ok=True)
    provenance = _provenance(ns, ("n", "repetitions", "methods", "indicator",
                                  "seed", "folds", "gammas", "epsilons",
                                  "sigmas", "g_kernel", "mu", "combine",
                                  "sigma_eval"))
    reps_path = os.path.join(ns.out_dir, "bench-bayes-reps.csv")
    _staged(reps_path, lambda tmp: write_bayes_csv(columns, tmp, provenance))
    table = bayes_table_text(columns)
    _atomic_write(os.path.join(ns.out_dir, "bench-bayes-table.txt"),
                  f"# {provenance}\n{table}\n")
    print(table)
    print(f"per-repetition lines: {reps_path}")
    aborted = [key for key, col in columns.items() if col.aborted]
    for key in aborted:
        print(f"warning: column {key} aborted after repeated failures",
              file=sys.stderr)
    return 1 if aborted else 0


_BENCH_UCI_DEFAULTS = dict(datasets="", methods="eps-l1svm,eps-l1vsvm",
                           kernel="rbf", indicator="acc", folds=10, seed=0,
                           gammas=GridSpec().gammas, deltas=GridSpec().deltas,
                           epsilons=GridSpec().epsilons,
                           sigmas=GridSpec().sigmas, g_kernel="gaussian",
                           mu="empirical", combine="product", sigma_eval=1.0,
                           out_dir=".", label_column=-1, positive_label="")
_BENCH_UCI_CONVERTERS = dict(datasets=str, methods=str, kernel=str,
                             indicator=str, folds=int, seed=int,
                             gammas=_float_list, deltas=_float_list,
                             epsilons=_float_list, sigmas=_float_list,
                             g_kernel=str, mu=str, combine=str,
                             sigma_eval=float, out_dir=str, label_column=int,
                             positive_label=str)


def _cmd_bench_uci(ns) -> int:
    paths = [tok.strip() for tok in ns.datasets.split(",") if tok.strip()]
    if not paths:
        raise ValueError("no datasets given")
    methods = tuple(tok.strip() for tok in ns.methods.split(",") if tok.strip())
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
    loaded = []
    for path in paths:
        try:
            loaded.append((os.path.basename(path),
                           load_csv(path, label_column=ns.label_column,
                                    positive_label=ns.positive_label or None)))
        except (OSError, ValueError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
            loaded.append((os.path.basename(path), exc))
    rows = run_uci_benchmark(loaded, methods, _grid_spec(ns, ns.indicator),
                             ns.kernel, _weight_config(ns))
    os.makedirs(ns.out_dir, exist_ok=True)
    provenance = _provenance(ns, ("datasets", "methods", "kernel", "indicator",
                                  "folds", "seed", "gammas", "deltas",
                                  "epsilons", "sigmas", "g_kernel", "mu",
                                  "combine", "sigma_eval"))
    csv_path = os.path.join(ns.out_dir, "bench-uci.csv")
    _staged(csv_path, lambda tmp: write_uci_csv(rows, tmp, provenance))
    table = uci_table_text(rows)
    _atomic_write(os.path.join(ns.out_dir, "bench-uci-table.txt"),
                  f"# {provenance}\n{table}\n")
    print(table)
    print(f"csv: {csv_path}")
    return 1 if any(row.status != "ok" for row in rows) else 0


# ---------------------------------------------------------------------------
# argument wiring

_SUBCOMMANDS = {
    "synth": (_cmd_synth, _SYNTH_DEFAULTS, _SYNTH_CONVERTERS),
    "fit": (_cmd_fit, _FIT_DEFAULTS, _FIT_CONVERTERS),
    "predict": (_cmd_predict, _PREDICT_DEFAULTS, _PREDICT_CONVERTERS),
    "cv": (_cmd_cv, _CV_DEFAULTS, _CV_CONVERTERS),
    "bench-bayes": (_cmd_bench_bayes, _BENCH_BAYES_DEFAULTS, _BENCH_BAYES_CONVERTERS),
    "bench-uci": (_cmd_bench_uci, _BENCH_UCI_DEFAULTS, _BENCH_UCI_CONVERTERS),
}

_CHOICES = dict(method=METHODS, kernel=("linear", "rbf"),
                g_kernel=("gaussian", "step"), mu=_MU_CHOICES,
                combine=("product", "additive"), indicator=_INDICATORS,
                kind=("gauss2d", "robust1d"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdfsvm",
        description="distribution-weighted kernel classification toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (func, defaults, converters) in _SUBCOMMANDS.items():
        sub = subparsers.add_parser(name)
        sub.set_defaults(func=func, defaults=defaults, converters=converters)
        sub.add_argument("--config", default=argparse.SUPPRESS,
                         help="flat key=value config file; flags override it")
        for key, default in defaults.items():
            flag = "--" + key.replace("_", "-")
            kwargs: dict = {"default": argparse.SUPPRESS}
            conv = converters[key]
            if key == "indicator" and name == "cv":
                kwargs["choices"] = ("acc", "vac")
            elif key in _CHOICES and conv is str:
                kwargs["choices"] = _CHOICES[key]
            kwargs["type"] = conv
            kwargs["help"] = f"default: {default}"
            sub.add_argument(flag, **kwargs)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    func = ns.func
    defaults, converters = ns.defaults, ns.converters
    cleaned = {k: v for k, v in vars(ns).items()
               if k not in ("func", "defaults", "converters", "command")}
    try:
        merged = _merge(defaults, converters, argparse.Namespace(**cleaned))
        return func(merged)
    except (OSError, ValueError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
