"""Thin command-line client of the solimag service.

Every verb is an HTTP call against the FastAPI app: by default the app runs
in-process (no server needed), and `--server URL` targets a remote instance
started with `uvicorn solimag.service:app`.

Exit status: 0 on success, 2 on validation errors, 3 on solver failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

EXIT_VALIDATION = 2
EXIT_SOLVER = 3


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # starlette warns about its httpx-based TestClient; harmless here
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _config_payload(config: str, output: str | None) -> dict:
    """A filesystem path wins; otherwise the name must be a builtin scenario."""
    payload: dict = {"output_dir": output}
    path = Path(config)
    if path.exists():
        payload["config_text"] = path.read_text()
    else:
        payload["builtin"] = config
    return payload


def _call(client, method: str, url: str, payload: dict | None = None):
    response = client.request(method, url, json=payload)
    if response.status_code == 200:
        return response.json()
    try:
        detail = response.json().get("detail", {})
    except Exception:
        detail = {}
    kind = detail.get("kind", "") if isinstance(detail, dict) else ""
    message = detail.get("message", response.text) if isinstance(detail, dict) else str(detail)
    click.echo(f"error ({kind or response.status_code}): {message}", err=True)
    sys.exit(EXIT_VALIDATION if kind == "validation" else EXIT_SOLVER)


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


@click.group()
@click.option("--server", default=None, envvar="SOLIMAG_SERVER",
              help="URL of a running service; default runs the app in-process.")
@click.pass_context
def main(ctx, server):
    """Numerical laboratory for semiclassical magnetic NLS soliton dynamics."""
    ctx.obj = server


@main.command()
@click.argument("config")
@click.option("--output", default=None, help="override the output directory")
@click.pass_obj
def run(server, config, output):
    """Run a scenario (CONFIG is a file path or a builtin name)."""
    with _client(server) as client:
        result = _call(client, "POST", "/scenario/run", _config_payload(config, output))
    _emit(result["summary"])


@main.command()
@click.argument("config")
@click.option("--output", default=None, help="override the output directory")
@click.pass_obj
def study(server, config, output):
    """Run an eps-sweep convergence study (needs >= 3 eps values)."""
    with _client(server) as client:
        result = _call(client, "POST", "/study/run", _config_payload(config, output))
    _emit(result["summary"])


@main.command()
@click.argument("config")
@click.option("--output", default=None, help="override the output directory")
@click.option("--profile/--no-profile", default=False, help="include the radial profile")
@click.pass_obj
def groundstate(server, config, output, profile):
    """Solve the scenario's ground state and print its constants."""
    path = Path(config)
    text = path.read_text() if path.exists() else None
    if text is None:
        from .scenarios import ScenarioError, load_builtin

        try:
            text = load_builtin(config)
        except ScenarioError as err:
            click.echo(f"error (validation): {err}", err=True)
            sys.exit(EXIT_VALIDATION)
    from .scenarios import ScenarioError, parse_scenario

    try:
        cfg = parse_scenario(text)
    except ScenarioError as err:
        click.echo(f"error (validation): {err}", err=True)
        sys.exit(EXIT_VALIDATION)
    payload = {
        "p": cfg.p,
        "dim": cfg.dim,
        "half_width": cfg.gs_half_width,
        "points": cfg.gs_points,
        "tol": cfg.gs_tol,
        "max_iter": cfg.gs_max_iter,
        "include_profile": profile,
    }
    with _client(server) as client:
        result = _call(client, "POST", "/groundstate", payload)
    if profile and output:
        out = Path(output)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "groundstate_profile.csv"
        with open(csv_path, "w") as fh:
            fh.write("radius,value\n")
            for s, v in zip(result["radial_nodes"], result["radial_values"]):
                fh.write(f"{s:.17g},{v:.17g}\n")
        result = dict(result, profile_csv=str(csv_path))
    result.pop("radial_nodes", None)
    result.pop("radial_values", None)
    _emit(result)


@main.command()
@click.argument("config")
@click.option("--output", default=None, help="override the output directory")
@click.pass_obj
def portrait(server, config, output):
    """Integrate the phase portraits of a portrait scenario."""
    with _client(server) as client:
        result = _call(client, "POST", "/portrait/run", _config_payload(config, output))
    _emit(result["summary"])


@main.command()
@click.argument("snapshot", type=click.Path(exists=True))
@click.pass_obj
def inspect(server, snapshot):
    """Print the header and field statistics of a snapshot file."""
    with _client(server) as client:
        result = _call(client, "POST", "/snapshot/inspect", {"path": str(Path(snapshot).resolve())})
    _emit(result)


@main.command()
@click.argument("config")
@click.pass_obj
def validate(server, config):
    """Validate a scenario config without running it."""
    with _client(server) as client:
        result = _call(client, "POST", "/scenario/validate", _config_payload(config, None))
    _emit(result["summary"])
    if not result["summary"]["valid"]:
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.pass_obj
def scenarios(server):
    """List the builtin scenario names."""
    with _client(server) as client:
        result = _call(client, "GET", "/scenarios")
    _emit(result)


if __name__ == "__main__":
    main()
