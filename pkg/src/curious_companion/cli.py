"""Command line front end.

Exit codes everywhere: 0 success, 1 domain failure (invalid map, mismatch
against the recorded example, scenario error), 2 usage or I/O problems.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .documents import (
    DataStore,
    DocumentError,
    fcm_from_doc,
    world_from_doc,
)
from .fcm import (
    compare_fuzzified,
    concept_partition,
    fuzzify_matrix,
    reduce_matrix,
    validate_fcm,
)
from .novelty import mark_novel
from .sim import ScenarioError, load_scenario, run_scenario, scenario_from_doc
from .stats import SurveySample, improvement_pct, welch_t


class CliError(click.ClickException):
    """I/O or document problem: exit code 2."""

    exit_code = 2


def _read_json_file(path: Path):
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON: {exc}")


@click.group()
def main() -> None:
    """Curiosity companion tools: validate maps, replay the worked example,
    run scripted scenarios, compare survey groups, serve sessions."""


# ----------------------------------------------------------------------
# validate-fcm

@main.command("validate-fcm")
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate_fcm_cmd(path: Path) -> None:
    """Check an FCM document against every structural invariant."""
    doc = _read_json_file(path)
    try:
        fcm = fcm_from_doc(doc)
    except DocumentError as exc:
        if exc.violations:
            for v in exc.violations:
                click.echo(f"violation {v.code}: {v.message}")
            click.echo(f"{path}: INVALID ({len(exc.violations)} violations)")
            raise SystemExit(1)
        # structurally unreadable counts as a document problem
        raise CliError(str(exc))
    report = validate_fcm(fcm)
    if report.ok:
        click.echo(f"{path}: OK ({fcm.size} concepts)")
        return
    for v in report.violations:
        click.echo(f"violation {v.code}: {v.message}")
    click.echo(f"{path}: INVALID ({len(report.violations)} violations)")
    raise SystemExit(1)


# ----------------------------------------------------------------------
# worked-example

def _matrix_lines(rows: list[list[str]], ids: list[int]) -> list[str]:
    width = max(len(s) for row in rows for s in row)
    head = "      " + " ".join(f"{j:>{width}}" for j in ids)
    out = [head]
    for cid, row in zip(ids, rows):
        out.append(f"  {cid:>3} " + " ".join(f"{s:>{width}}" for s in row))
    return out


@main.command("worked-example")
@click.option(
    "--fixtures",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory overriding the bundled fixture documents.",
)
def worked_example_cmd(fixtures: Path | None) -> None:
    """Replay the recorded worked example and diff it stage by stage."""
    store = DataStore(fixtures)
    try:
        learner = fcm_from_doc(store.read_json("fcms/transport-learner.json"))
        companion = fcm_from_doc(store.read_json("fcms/transport-expert.json"))
        world = world_from_doc(store.read_json("worlds/plant-root.json"), store.read_json)
        golden = store.read_json("golden/worked-example.json")
    except DocumentError as exc:
        raise CliError(str(exc))

    failures: list[str] = []

    def check(label: str, got, expected) -> None:
        if got != expected:
            failures.append(label)
            click.echo(f"MISMATCH {label}:")
            click.echo(f"  expected: {expected!r}")
            click.echo(f"  got:      {got!r}")

    _, c_new = concept_partition(learner, companion)
    click.echo(f"new concepts: {sorted(c_new)}")
    check("new concepts", sorted(c_new), golden["c_new"])

    reduced = reduce_matrix(companion, c_new)
    reduced_ids = [c.id for c in reduced.concepts]
    click.echo("reduced expert matrix:")
    for line in _matrix_lines(
        [[f"{v:g}" for v in row] for row in reduced.weights], reduced_ids
    ):
        click.echo(line)
    check(
        "reduced expert matrix",
        [[float(v) for v in row] for row in reduced.weights],
        [[float(v) for v in row] for row in golden["reduced_weights"]],
    )

    learner_f = fuzzify_matrix(learner.weights)
    reduced_f = fuzzify_matrix(reduced.weights)
    learner_ids = [c.id for c in learner.concepts]
    click.echo("fuzzified learner matrix:")
    for line in _matrix_lines(learner_f.symbols(), learner_ids):
        click.echo(line)
    click.echo("fuzzified reduced expert matrix:")
    for line in _matrix_lines(reduced_f.symbols(), reduced_ids):
        click.echo(line)
    check("fuzzified learner matrix", learner_f.symbols(), golden["learner_fuzzified"])
    check(
        "fuzzified reduced expert matrix",
        reduced_f.symbols(),
        golden["companion_fuzzified"],
    )

    r_s = compare_fuzzified(learner_f, reduced_f, learner_ids)
    pairs = sorted(p.as_tuple() for p in r_s)
    click.echo(f"surprising links: {pairs}")
    check("surprising links", pairs, [tuple(p) for p in golden["r_s"]])

    report = mark_novel(world.activities, c_new, r_s)
    for aid, expected in sorted(golden["activities"].items()):
        verdict = report.novel_activities[aid].novel
        click.echo(f"activity {aid}: {'novel' if verdict else 'not novel'}")
        check(f"activity {aid} verdict", verdict, expected)

    if failures:
        click.echo(f"FAILED: {len(failures)} stage(s) differ")
        raise SystemExit(1)
    click.echo("OK: every stage matches the recorded example")


# ----------------------------------------------------------------------
# run

@main.command("run")
@click.argument("scenario")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option(
    "--data-dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory overriding bundled documents.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the transcript (JSON lines) to this file.",
)
def run_cmd(scenario: str, seed: int | None, data_dir: Path | None, out: Path | None) -> None:
    """Run a scenario to completion; SCENARIO is a bundled name or a file."""
    store = DataStore(data_dir)
    try:
        as_path = Path(scenario)
        if as_path.is_file():
            sc = scenario_from_doc(_read_json_file(as_path), store)
        else:
            sc = load_scenario(store, scenario)
    except DocumentError as exc:
        raise CliError(str(exc))
    except ScenarioError as exc:
        click.echo(f"scenario error: {exc}")
        raise SystemExit(1)
    try:
        result = run_scenario(sc, seed=seed)
    except ScenarioError as exc:
        click.echo(f"scenario error: {exc}")
        raise SystemExit(1)
    if out is not None:
        try:
            out.write_text(result.transcript.to_jsonl())
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}")
        click.echo(f"transcript: {out} ({len(result.transcript.records)} records)")
    click.echo(json.dumps(result.metrics.to_doc(), indent=2, sort_keys=True))


# ----------------------------------------------------------------------
# stats-welch

@main.command("stats-welch")
@click.argument(
    "samples",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=False,
)
def stats_welch_cmd(samples: Path | None) -> None:
    """Compare two survey groups from a summary document.

    Without an argument, the bundled interest-retention samples are used.
    """
    if samples is not None:
        doc = _read_json_file(samples)
    else:
        try:
            doc = DataStore().read_json("samples/interest-retention.json")
        except DocumentError as exc:
            raise CliError(str(exc))
    try:
        a = SurveySample(**doc["a"])
        b = SurveySample(**doc["b"])
        band = tuple(float(x) for x in doc.get("critical_band", (-1.997, 1.997)))
        result = welch_t(a, b, band)
        gain = improvement_pct(a.mean, b.mean)
    except (TypeError, KeyError) as exc:
        raise CliError(f"bad samples document: {exc}")
    except ValueError as exc:
        click.echo(f"invalid samples: {exc}")
        raise SystemExit(1)
    click.echo(f"group a: n={a.n} mean={a.mean:g} {a.spread_kind.value}={a.spread:g}")
    click.echo(f"group b: n={b.n} mean={b.mean:g} {b.spread_kind.value}={b.spread:g}")
    click.echo(f"t = {result.t:.4f}")
    click.echo(f"critical band = [{band[0]:g}, {band[1]:g}]")
    click.echo(f"significant: {'yes' if result.significant else 'no'}")
    click.echo(f"improvement = {gain:.2f}%")


# ----------------------------------------------------------------------
# serve

@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option(
    "--data-dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory overriding bundled documents.",
)
@click.option(
    "--state-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Persist sessions here; omit for in-memory sessions.",
)
@click.option(
    "--ui-dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Serve a static client from this directory at /.",
)
def serve_cmd(
    host: str,
    port: int,
    data_dir: Path | None,
    state_dir: Path | None,
    ui_dir: Path | None,
) -> None:
    """Serve sessions over HTTP."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=data_dir, state_dir=state_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
