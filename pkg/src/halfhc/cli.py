"""Command-line front end.

Subcommands: `analyze` (code tables and ones-rate report for a corpus),
`solve` (run one solver on an instance file), `dyadic-search` (fit a
matcher to a channel spec), `pipeline` (end-to-end corpus -> bits ->
channel symbols evaluation). Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bitio import read_bits, write_bits
from .codec import encode, half_huffman
from .distribution import SymbolDistribution
from .huffman import codebook_to_csv
from .matcher import (
    ChannelSpec,
    MatcherCode,
    average_cost,
    dyadic_search,
    evaluate_stream,
    kl_divergence,
    realize_matcher,
    run_pipeline,
)
from .ones import ones_report
from .rng import fair_bits
from .selection import load_instance, solve

_SOLVER_CHOICES = click.Choice(["exhaustive", "bisection", "bb"])


class DataError(click.ClickException):
    """Bad input data (malformed files, degenerate corpora)."""

    exit_code = 2


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@click.group()
@click.version_option(package_name="halfhc")
def cli() -> None:
    """Prefix-code construction with ones-rate balancing."""


@cli.command()
@click.argument("corpus", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--codec", type=click.Choice(["hc", "halfhc"]), default=None,
              help="Restrict the report to one codec (default: both).")
@click.option("--solver", type=_SOLVER_CHOICES, default="exhaustive", show_default=True)
@click.option("--epsilon", type=float, default=1e-12, show_default=True,
              help="Bisection bracket tolerance.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write the JSON report here.")
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None,
              help="Write the code table CSV here (the halfhc table unless --codec hc).")
@click.option("--bits", "bits_path", type=click.Path(path_type=Path), default=None,
              help="Write the encoded corpus here as a packed bit-stream file "
                   "(the halfhc stream unless --codec hc).")
def analyze(corpus: Path, codec: str | None, solver: str, epsilon: float,
            out_path: Path | None, csv_path: Path | None, bits_path: Path | None) -> None:
    """Build both code tables for CORPUS and report expected/observed ones-rates."""
    text = _read_text(corpus)
    try:
        dist = SymbolDistribution.from_corpus(text)
        artifact = half_huffman(dist, solver=solver, epsilon=epsilon)
    except ValueError as exc:
        raise DataError(f"{corpus}: {exc}") from exc

    names = [codec] if codec else ["hc", "halfhc"]
    click.echo(f"corpus: {len(text)} symbols, alphabet size {dist.n}")
    click.echo(
        f"selection x = {list(artifact.selection.choices)}, "
        f"objective = {float(artifact.selection.objective):.6g} (solver={solver})"
    )
    report: dict = {
        "alphabet_size": dist.n,
        "corpus_symbols": len(text),
        "selection": artifact.selection.to_json_dict(),
        "codecs": {},
    }
    for name in names:
        book = artifact.codebook(name)
        bits = encode(text, book)
        stats = ones_report(book, dist, bits)
        verdict = "rejected" if stats.fair_rejected else "fair not rejected"
        click.echo(f"[{name}] expected q = {stats.expected_rate:.6g}")
        click.echo(
            f"[{name}] empirical q = {stats.rate:.6g} ({stats.ones}/{stats.bits} ones), "
            f"95% CI ({stats.ci_low:.6g}, {stats.ci_high:.6g})"
        )
        click.echo(f"[{name}] fair-stream hypothesis: {verdict}")
        click.echo(f"[{name}] code table:")
        click.echo(codebook_to_csv(book, dist), nl=False)
        entry = stats.to_json_dict()
        entry["table"] = [
            {"symbol": s, "probability": float(p), "codeword": w, "length": len(w)}
            for s, p, w in zip(book.symbols, dist.probs, book.codewords)
        ]
        report["codecs"][name] = entry
    if out_path is not None:
        _write_json(out_path, report)
    active = "hc" if codec == "hc" else "halfhc"
    if csv_path is not None:
        csv_path.write_text(
            codebook_to_csv(artifact.codebook(active), dist), encoding="utf-8"
        )
    if bits_path is not None:
        write_bits(bits_path, encode(text, artifact.codebook(active)))


@cli.command("solve")
@click.argument("instance", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--solver", type=_SOLVER_CHOICES, default="exhaustive", show_default=True)
@click.option("--epsilon", type=float, default=None,
              help="Override the instance's bisection tolerance.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write the selection JSON here.")
def solve_cmd(instance: Path, solver: str, epsilon: float | None,
              out_path: Path | None) -> None:
    """Solve a selection instance file (JSON fields `a`, `b`, optional `epsilon`)."""
    try:
        coeffs, offset, file_epsilon = load_instance(instance)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"{instance}: {exc}") from exc
    if epsilon is None:
        epsilon = file_epsilon
    try:
        selection = solve(coeffs, offset, method=solver, epsilon=epsilon)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    click.echo(f"x = {list(selection.choices)}")
    click.echo(f"objective = {float(selection.objective)!r}")
    if selection.evaluations is not None:
        click.echo(f"evaluations = {selection.evaluations}")
    if selection.iterations is not None:
        click.echo(f"iterations = {selection.iterations}")
    if selection.nodes is not None:
        click.echo(f"nodes = {selection.nodes}")
    if out_path is not None:
        _write_json(out_path, selection.to_json_dict())


@cli.command("dyadic-search")
@click.option("--channel", "channel_path", required=True,
              type=click.Path(path_type=Path, dir_okay=False),
              help="Channel spec JSON (`symbols`, `w`, `S`, `p_star`).")
@click.option("--depth", type=int, default=8, show_default=True,
              help="Dyadic resolution: masses are multiples of 2**-depth.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write the realized matcher JSON here.")
def dyadic_search_cmd(channel_path: Path, depth: int, out_path: Path | None) -> None:
    """Brute-force the KL-closest dyadic pmf under the channel's cost budget."""
    try:
        channel = ChannelSpec.load(channel_path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"{channel_path}: {exc}") from exc
    try:
        fit = dyadic_search(channel, depth=depth)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    matcher = realize_matcher(fit, channel.symbols)
    click.echo(f"d = {[float(m) for m in fit.masses]}  (k = {list(fit.counts)} / 2^{fit.depth})")
    click.echo(f"kl = {fit.kl!r}")
    click.echo(f"cost = {fit.cost!r}  (budget {channel.budget!r})")
    click.echo(f"matcher codewords = {len(matcher.entries)}")
    if out_path is not None:
        matcher.save(out_path)


@cli.command()
@click.argument("corpus", required=False, type=click.Path(path_type=Path, dir_okay=False))
@click.option("--channel", "channel_path", required=True,
              type=click.Path(path_type=Path, dir_okay=False),
              help="Channel spec JSON (`symbols`, `w`, `S`, `p_star`).")
@click.option("--matcher", "matcher_path", type=click.Path(path_type=Path, dir_okay=False),
              default=None, help="Matcher code JSON (list of {codeword, symbol}).")
@click.option("--depth", type=int, default=None,
              help="Fit a matcher by dyadic search at this depth instead of --matcher.")
@click.option("--codec", type=click.Choice(["hc", "halfhc"]), default=None,
              help="Restrict the run to one codec (default: both).")
@click.option("--solver", type=_SOLVER_CHOICES, default="exhaustive", show_default=True)
@click.option("--epsilon", type=float, default=1e-12, show_default=True)
@click.option("--fair-bits", "fair_count", type=int, default=None,
              help="Smoke mode: push this many seeded fair bits through the matcher "
                   "instead of encoding a corpus.")
@click.option("--bits", "bits_path", type=click.Path(path_type=Path, dir_okay=False),
              default=None,
              help="Evaluate a recorded packed bit-stream file through the matcher.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the fair-bits generator.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write the JSON report here.")
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None,
              help="Write `variant,cost,kl` rows here (plus the budget as a reference row).")
def pipeline(corpus: Path | None, channel_path: Path, matcher_path: Path | None,
             depth: int | None, codec: str | None, solver: str, epsilon: float,
             fair_count: int | None, bits_path: Path | None, seed: int,
             out_path: Path | None, csv_path: Path | None) -> None:
    """Evaluate CORPUS end to end: compress, parse with a matcher, score the output."""
    if matcher_path is None and depth is None:
        raise click.UsageError("provide --matcher or --depth")
    if matcher_path is not None and depth is not None:
        raise click.UsageError("--matcher and --depth are mutually exclusive")
    if corpus is None and fair_count is None and bits_path is None:
        raise click.UsageError("provide a CORPUS, --bits, or --fair-bits")
    try:
        spec = ChannelSpec.load(channel_path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"{channel_path}: {exc}") from exc
    if matcher_path is not None:
        try:
            matcher = MatcherCode.load(matcher_path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"{matcher_path}: {exc}") from exc
    else:
        try:
            matcher = realize_matcher(dyadic_search(spec, depth=depth), spec.symbols)
        except ValueError as exc:
            raise DataError(str(exc)) from exc

    baseline = tuple(float(m) for m in matcher.dyadic_pmf(spec.symbols))
    report: dict = {
        "channel": spec.to_json_dict(),
        "matcher": {"codewords": len(matcher.entries), "max_length": matcher.max_length},
        "baseline": {
            "d": list(baseline),
            "kl": kl_divergence(baseline, spec.target),
            "cost": average_cost(spec.costs, baseline),
        },
        "variants": {},
    }
    rows: list[tuple[str, float, float]] = []

    if fair_count is not None:
        bits = fair_bits(seed, fair_count)
        try:
            stream = evaluate_stream(bits, matcher, spec)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        report["variants"]["fair"] = stream.to_json_dict()
        rows.append(("fair", stream.cost, stream.kl))
        click.echo(
            f"[fair] {fair_count} seeded bits: kl = {stream.kl:.6g}, cost = {stream.cost:.6g} "
            f"(baseline kl {report['baseline']['kl']:.6g})"
        )

    if bits_path is not None:
        try:
            stream = evaluate_stream(read_bits(bits_path), matcher, spec)
        except (OSError, ValueError) as exc:
            raise DataError(f"{bits_path}: {exc}") from exc
        report["variants"]["stream"] = stream.to_json_dict()
        rows.append(("stream", stream.cost, stream.kl))
        click.echo(
            f"[stream] {stream.ones.bits} recorded bits: kl = {stream.kl:.6g}, "
            f"cost = {stream.cost:.6g}"
        )

    if corpus is not None:
        text = _read_text(corpus)
        for name in [codec] if codec else ["hc", "halfhc"]:
            try:
                result = run_pipeline(text, name, matcher, spec, solver=solver, epsilon=epsilon)
            except ValueError as exc:
                raise DataError(f"{corpus}: {exc}") from exc
            entry = result.to_json_dict()
            del entry["baseline"]  # shared, reported once at the top level
            del entry["codec"]
            report["variants"][name] = entry
            rows.append((name, result.stream.cost, result.stream.kl))
            verdict = "rejected" if result.stream.ones.fair_rejected else "fair not rejected"
            click.echo(
                f"[{name}] q = {result.stream.ones.rate:.6g} "
                f"(expected {result.stream.ones.expected_rate:.6g}), "
                f"fair-stream hypothesis: {verdict}"
            )
            click.echo(
                f"[{name}] kl = {result.stream.kl:.6g}, cost = {result.stream.cost:.6g}, "
                f"parsed {result.stream.parsed} symbols, "
                f"{result.stream.discarded_bits} tail bits discarded"
            )
    click.echo(
        f"[baseline] kl = {report['baseline']['kl']:.6g}, "
        f"cost = {report['baseline']['cost']:.6g}, budget S = {spec.budget:.6g}"
    )

    if out_path is not None:
        _write_json(out_path, report)
    if csv_path is not None:
        lines = ["variant,cost,kl"]
        lines += [f"{name},{cost!r},{kl!r}" for name, cost, kl in rows]
        lines.append(f"constraint,{spec.budget!r},")
        csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    """Run the CLI, mapping usage errors to exit 1 and data errors to exit 2."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())
