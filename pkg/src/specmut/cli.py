"""Command-line interface for the species mutation workbench."""

from __future__ import annotations

import json
import sys

import click

from .exchange import (
    ExchangeMatrix, SkewSymmetrizer, check_divisibility, family_matrix,
    find_skew_symmetrizer, is_strongly_primitive_proxy,
)
from .species import realize, dimension_matrix, verify_realization
from .series import Potential, SeriesElement, SpeciesWithPotential, random_potential
from .mutation import mutate
from .nondegen import (
    check_sequence, deformation_dim_truncated, search_nondegenerate,
)


def _load_matrix(matrix_json, family):
    if (matrix_json is None) == (family is None):
        raise click.UsageError("give exactly one of --matrix or --family")
    if family is not None:
        try:
            a, b = (int(x) for x in family.split(","))
        except ValueError:
            raise click.UsageError("--family expects 'a,b'")
        return family_matrix(a, b)
    data = json.loads(matrix_json)
    if isinstance(data, list):
        data = {"rows": data}
    return ExchangeMatrix.from_json(data)


def _realized(matrix_json, family, prime):
    b = _load_matrix(matrix_json, family)
    d = find_skew_symmetrizer(b)
    if d is None:
        raise click.ClickException("matrix is not skew-symmetrizable")
    if not check_divisibility(b, d):
        raise click.ClickException(
            "divisibility hypothesis fails for the minimal symmetrizer")
    return b, d, realize(b, d, prime)


def _echo_json(data):
    click.echo(json.dumps(data, indent=2, sort_keys=True))


@click.group()
def main():
    """Exact mutation workbench for species with potential."""


@main.command()
@click.argument("a", type=int)
@click.argument("b", type=int)
def family(a, b):
    """Print the 4x4 family matrix for parameters A, B with its metadata."""
    m = family_matrix(a, b)
    d = find_skew_symmetrizer(m)
    _echo_json({
        "matrix": m.to_json(),
        "symmetrizer": list(d.diag),
        "divisibility_ok": check_divisibility(m, d),
        "strongly_primitive_proxy": is_strongly_primitive_proxy(m),
    })


@main.command("realize")
@click.option("--matrix", "matrix_json", default=None,
              help="exchange matrix as JSON rows")
@click.option("--family", "family_ab", default=None, help="family parameters a,b")
@click.option("--prime", default=101, show_default=True)
@click.option("--dot", is_flag=True, help="emit DOT instead of JSON")
def realize_cmd(matrix_json, family_ab, prime, dot):
    """Realize a skew-symmetrizable matrix as a species and verify it."""
    b, d, sp = _realized(matrix_json, family_ab, prime)
    if dot:
        click.echo(sp.to_dot())
        return
    report = verify_realization(sp, b)
    _echo_json({
        "species": sp.to_json(),
        "symmetrizer": list(d.diag),
        "verification": report,
    })


@main.command("mutate")
@click.option("--matrix", "matrix_json", default=None)
@click.option("--family", "family_ab", default=None)
@click.option("--prime", default=101, show_default=True)
@click.option("--trunc", default=6, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--sequence", required=True,
              help="comma-separated 1-based vertices, e.g. 1,2,3")
def mutate_cmd(matrix_json, family_ab, prime, trunc, seed, sequence):
    """Mutate a random-potential realization along a vertex sequence."""
    _, _, sp = _realized(matrix_json, family_ab, prime)
    seq = [int(k) for k in sequence.split(",")]
    pot = random_potential(sp, trunc, seed)
    swp = SpeciesWithPotential.build(sp, trunc, pot)
    report = check_sequence(swp, seq, seed=seed)
    _echo_json(report.to_json())


@main.command("check")
@click.option("--matrix", "matrix_json", default=None)
@click.option("--family", "family_ab", default=None)
@click.option("--prime", default=101, show_default=True)
@click.option("--trunc", default=6, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--rigidity", is_flag=True, help="also report truncated rigidity")
def check_cmd(matrix_json, family_ab, prime, trunc, seed, rigidity):
    """Realize, draw a random potential, and report basic diagnostics."""
    b, d, sp = _realized(matrix_json, family_ab, prime)
    pot = random_potential(sp, trunc, seed)
    swp = SpeciesWithPotential.build(sp, trunc, pot)
    out = {
        "matrix": b.to_json(),
        "symmetrizer": list(d.diag),
        "verification": verify_realization(sp, b),
        "potential_terms_by_degree": pot.term_count_by_degree(),
    }
    if rigidity:
        out["rigidity"] = deformation_dim_truncated(swp).to_json()
    _echo_json(out)


@main.command("search")
@click.option("--matrix", "matrix_json", default=None)
@click.option("--family", "family_ab", default=None)
@click.option("--prime", default=101, show_default=True)
@click.option("--trunc", default=6, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--max-len", default=4, show_default=True)
@click.option("--trials", default=20, show_default=True)
@click.option("--support", default="all", show_default=True,
              type=click.Choice(["all", "cycles-only-min-degree"]))
def search_cmd(matrix_json, family_ab, prime, trunc, seed, max_len, trials,
               support):
    """Search for a potential non-degenerate up to the given sequence length."""
    _, _, sp = _realized(matrix_json, family_ab, prime)
    res = search_nondegenerate(sp, trunc, max_len=max_len, trials=trials,
                               seed=seed, support=support)
    _echo_json(res.certificate())
    if not res.found:
        sys.exit(1)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the HTTP session API."""
    import uvicorn
    from .service import app
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
