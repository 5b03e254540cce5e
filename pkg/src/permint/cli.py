"""Command-line front end.

A thin client over the service endpoints: by default each subcommand calls
the endpoint functions in-process; with ``--server URL`` the same requests
go over HTTP to a running instance (``uvicorn permint.service:app``).

Exit codes: 0 success, 1 invalid input (bad flags, unreadable files, guard
violations), 2 verification failure (a tolerance gate tripped).

Relative ``--output`` paths are resolved against $PERMINT_OUTPUT_DIR when
that variable is set.
"""

from __future__ import annotations

import json
import os
import re
import sys
from pathlib import Path

import click
import httpx

from . import __version__, linops
from .mcint import IntegralForm
from .service import schemas
from .service.app import (
    compute_amplitude as svc_amplitude,
    compute_distribution as svc_distribution,
    compute_distribution_csv as svc_distribution_csv,
    compute_permanent as svc_permanent,
    generate_haar_unitary as svc_haar,
    generate_permutation_unitary as svc_permutation,
    run_cross_form_report as svc_cross_form,
    run_identity_checks as svc_identities,
    run_mc_integral as svc_mc_integral,
)

OUTPUT_DIR_ENV = "PERMINT_OUTPUT_DIR"


class VerificationFailure(Exception):
    """A verification subcommand ran fine but a tolerance gate tripped."""


class ServiceClient:
    """Dispatches requests either in-process or to a remote server."""

    def __init__(self, server: str | None = None):
        self._http = httpx.Client(base_url=server, timeout=600.0) if server else None

    def close(self) -> None:
        if self._http is not None:
            self._http.close()

    def _post(self, path, request, response_model=None, text: bool = False):
        resp = self._http.post(path, json=request.model_dump())
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise click.ClickException(f"server returned {resp.status_code}: {detail}")
        if text:
            return resp.text
        return response_model.model_validate(resp.json())

    def haar_unitary(self, m: int, seed: int) -> schemas.MatrixModel:
        req = schemas.HaarUnitaryRequest(m=m, seed=seed)
        if self._http is None:
            return svc_haar(req)
        return self._post("/unitary/haar", req, schemas.MatrixModel)

    def permutation_unitary(self, mapping) -> schemas.MatrixModel:
        req = schemas.PermutationUnitaryRequest(mapping=list(mapping))
        if self._http is None:
            return svc_permutation(req)
        return self._post("/unitary/permutation", req, schemas.MatrixModel)

    def permanent(self, matrix: schemas.MatrixModel, algorithm: str) -> schemas.PermanentResponse:
        req = schemas.PermanentRequest(matrix=matrix, algorithm=algorithm)
        if self._http is None:
            return svc_permanent(req)
        return self._post("/permanent", req, schemas.PermanentResponse)

    def amplitude(self, matrix, n, occupations) -> schemas.AmplitudeResponse:
        req = schemas.AmplitudeRequest(matrix=matrix, n=n, occupations=list(occupations))
        if self._http is None:
            return svc_amplitude(req)
        return self._post("/amplitude", req, schemas.AmplitudeResponse)

    def distribution(self, matrix, n) -> schemas.DistributionResponse:
        req = schemas.DistributionRequest(matrix=matrix, n=n)
        if self._http is None:
            return svc_distribution(req)
        return self._post("/distribution", req, schemas.DistributionResponse)

    def distribution_csv(self, matrix, n) -> str:
        req = schemas.DistributionRequest(matrix=matrix, n=n)
        if self._http is None:
            return svc_distribution_csv(req)
        return self._post("/distribution/csv", req, text=True)

    def mc_integrate(self, matrix, n, form, n_samples, seed, workers) -> schemas.McEstimateModel:
        req = schemas.McIntegrateRequest(
            matrix=matrix, n=n, form=form, n_samples=n_samples, seed=seed, workers=workers
        )
        if self._http is None:
            return svc_mc_integral(req)
        return self._post("/mc/integrate", req, schemas.McEstimateModel)

    def cross_form(self, matrix, n, n_samples, seed, workers) -> schemas.CrossFormResponse:
        req = schemas.CrossFormRequest(
            matrix=matrix, n=n, n_samples=n_samples, seed=seed, workers=workers
        )
        if self._http is None:
            return svc_cross_form(req)
        return self._post("/mc/cross-form-report", req, schemas.CrossFormResponse)

    def identities(self, n_samples, seed, workers) -> schemas.IdentitiesResponse:
        req = schemas.IdentitiesRequest(n_samples=n_samples, seed=seed, workers=workers)
        if self._http is None:
            return svc_identities(req)
        return self._post("/mc/identities", req, schemas.IdentitiesResponse)


def _parse_int_list(text: str, what: str) -> list[int]:
    tokens = [tok for tok in re.split(r"[,\s]+", text.strip()) if tok]
    try:
        values = [int(tok) for tok in tokens]
    except ValueError:
        raise click.UsageError(f"could not parse {what} {text!r} as integers")
    if not values:
        raise click.UsageError(f"{what} is empty")
    return values


def _load_matrix_model(path: str) -> schemas.MatrixModel:
    try:
        return schemas.MatrixModel.from_array(linops.load_matrix(path))
    except OSError as exc:
        raise click.ClickException(f"cannot read matrix file: {exc}")


def _resolve_output(path_str: str) -> Path:
    path = Path(path_str)
    if not path.is_absolute():
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            path = Path(base) / path
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        _resolve_output(output).write_text(text if text.endswith("\n") else text + "\n")


@click.group()
@click.version_option(__version__, prog_name="permint")
@click.option("--server", metavar="URL", default=None, help="Talk to a running service instead of computing in-process.")
@click.pass_context
def cli(ctx: click.Context, server: str | None) -> None:
    """Permanents, photon-counting amplitudes, and their Gaussian integrals."""
    ctx.obj = ServiceClient(server)
    ctx.call_on_close(ctx.obj.close)


@cli.command("gen-unitary")
@click.option("--m", "m", type=int, default=None, help="Mode count.")
@click.option("--seed", type=int, default=None, help="Haar sampling seed.")
@click.option("--permutation", default=None, metavar="SIGMA", help="Comma-separated images of modes 1..m; overrides Haar sampling.")
@click.option("--output", default=None, metavar="PATH", help="Write the matrix JSON here instead of stdout.")
@click.pass_obj
def gen_unitary(client: ServiceClient, m, seed, permutation, output) -> None:
    """Generate a Haar-random or permutation unitary as matrix JSON."""
    if permutation is not None:
        mapping = _parse_int_list(permutation, "--permutation")
        if m is not None and m != len(mapping):
            raise click.UsageError(f"--m {m} disagrees with permutation length {len(mapping)}")
        model = client.permutation_unitary(mapping)
    else:
        if m is None:
            raise click.UsageError("--m is required unless --permutation is given")
        if seed is None:
            raise click.UsageError("--seed is required for Haar sampling")
        model = client.haar_unitary(m, seed)
    _emit(json.dumps(model.model_dump()), output)


@cli.command("permanent")
@click.option("--matrix", required=True, metavar="PATH", help="Matrix JSON file.")
@click.option("--algo", type=click.Choice(["naive", "ryser", "macmahon"]), default="ryser", show_default=True)
@click.pass_obj
def permanent_command(client: ServiceClient, matrix, algo) -> None:
    """Print the permanent of a matrix."""
    resp = client.permanent(_load_matrix_model(matrix), algo)
    click.echo(repr(complex(resp.re, resp.im)))


@cli.command("amplitude")
@click.option("--matrix", required=True, metavar="PATH")
@click.option("--n", "n", type=int, required=True, help="Photon number (input modes 1..n occupied).")
@click.option("--config", "config", required=True, metavar="T", help="Output occupations, e.g. 1,0,1.")
@click.pass_obj
def amplitude_command(client: ServiceClient, matrix, n, config) -> None:
    """Print the transition amplitude and probability of one configuration."""
    occupations = _parse_int_list(config, "--config")
    resp = client.amplitude(_load_matrix_model(matrix), n, occupations)
    click.echo(f"amplitude = {complex(resp.re, resp.im)!r}")
    click.echo(f"probability = {resp.probability!r}")


@cli.command("distribution")
@click.option("--matrix", required=True, metavar="PATH")
@click.option("--n", "n", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", default=None, metavar="PATH")
@click.pass_obj
def distribution_command(client: ServiceClient, matrix, n, fmt, output) -> None:
    """Write the full output distribution as CSV (or JSON)."""
    model = _load_matrix_model(matrix)
    if fmt == "csv":
        _emit(client.distribution_csv(model, n), output)
    else:
        _emit(json.dumps(client.distribution(model, n).model_dump(), indent=1), output)


@cli.command("mc-integrate")
@click.option("--matrix", required=True, metavar="PATH")
@click.option("--n", "n", type=int, required=True)
@click.option("--form", type=click.Choice([f.value for f in IntegralForm], case_sensitive=False), required=True)
@click.option("--samples", type=int, required=True, help="Sample count (>= 1000).")
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=int, default=1, show_default=True, help="Worker threads; never changes the result.")
@click.pass_obj
def mc_integrate_command(client: ServiceClient, matrix, n, form, samples, seed, workers) -> None:
    """Monte-Carlo estimate of |perm(U[:n,:n])|^2 in one integral form."""
    resp = client.mc_integrate(_load_matrix_model(matrix), n, form, samples, seed, workers)
    click.echo(json.dumps(resp.model_dump()))


@cli.command("verify-equivalence")
@click.option("--matrix", required=True, metavar="PATH")
@click.option("--n", "n", type=int, required=True)
@click.option("--samples", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.pass_obj
def verify_equivalence_command(client: ServiceClient, matrix, n, samples, seed, workers) -> None:
    """Run all four integral forms against the Ryser reference; exit 2 on any |z| > 4."""
    resp = client.cross_form(_load_matrix_model(matrix), n, samples, seed, workers)
    click.echo(json.dumps(resp.model_dump(), indent=1))
    if not resp.passed:
        worst = max(abs(f.z) for f in resp.forms)
        raise VerificationFailure(f"max |z| = {worst:.2f} exceeds 4")


@cli.command("identities")
@click.option("--samples", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.pass_obj
def identities_command(client: ServiceClient, samples, seed, workers) -> None:
    """Monte-Carlo check of the four single-mode Gaussian identities; exit 2 on failure."""
    resp = client.identities(samples, seed, workers)
    click.echo(json.dumps(resp.model_dump(), indent=1))
    if not resp.passed:
        failed = [c.form for c in resp.checks if not c.passed]
        raise VerificationFailure(f"identity checks failed: {', '.join(failed)}")


def main(argv=None) -> int:
    """Run the CLI and map outcomes onto the 0/1/2 exit-code contract."""
    try:
        cli.main(args=argv, prog_name="permint", standalone_mode=False)
    except VerificationFailure as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return 2
    except click.exceptions.Exit as exc:
        return 0 if exc.exit_code == 0 else 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (ValueError, OverflowError, httpx.HTTPError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
