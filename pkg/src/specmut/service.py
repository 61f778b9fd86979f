"""HTTP session API over the mutation engine.

Sessions live in memory.  Each session carries the full state stack, so undo
restores the previous species-with-potential exactly, and replaying the same
requests against a fresh session reproduces identical states.
"""

from __future__ import annotations

import uuid

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .exchange import (
    ExchangeMatrix, check_divisibility, family_matrix, find_skew_symmetrizer,
)
from .species import dimension_matrix, realize
from .series import SpeciesWithPotential, random_potential
from .mutation import mutate

app = FastAPI(title="species mutation sessions")

_sessions: dict = {}


class SessionRequest(BaseModel):
    rows: list | None = None
    family: list | None = None       # [a, b]
    prime: int = 101
    trunc: int = 6
    seed: int = 0


class MutateRequest(BaseModel):
    k: int


class _Session:
    def __init__(self, sid, b, d, swp, seed):
        self.id = sid
        self.seed = seed
        self.initial_matrix = b
        self.symmetrizer = d
        # parallel stacks: states[i] is the state after history[:i]
        self.states = [swp]
        self.matrices = [b]
        self.history = []
        self.steps = []              # per-mutation metadata

    @property
    def current(self):
        return self.states[-1]

    def to_json(self):
        sp = self.current.species
        return {
            "id": self.id,
            "seed": self.seed,
            "prime": sp.p,
            "trunc": self.current.trunc,
            "degrees": list(sp.degrees),
            "history": list(self.history),
            "matrix": self.matrices[-1].to_json(),
            "initial_matrix": self.initial_matrix.to_json(),
            "arrows": [{"name": a.name, "source": a.source,
                        "target": a.target, "kind": a.kind}
                       for a in sp.arrows],
            "steps": list(self.steps),
            "can_undo": bool(self.history),
        }


def _get_session(sid) -> _Session:
    sess = _sessions.get(sid)
    if sess is None:
        raise HTTPException(status_code=404, detail="unknown session")
    return sess


@app.post("/api/session", status_code=201)
def create_session(req: SessionRequest):
    if (req.rows is None) == (req.family is None):
        raise HTTPException(status_code=400,
                            detail="give exactly one of rows or family")
    try:
        if req.family is not None:
            a, bb = req.family
            b = family_matrix(int(a), int(bb))
        else:
            b = ExchangeMatrix(tuple(tuple(r) for r in req.rows))
    except (ValueError, TypeError) as err:
        raise HTTPException(status_code=400, detail=str(err))
    d = find_skew_symmetrizer(b)
    if d is None:
        raise HTTPException(status_code=400,
                            detail="matrix is not skew-symmetrizable")
    if not check_divisibility(b, d):
        raise HTTPException(status_code=400,
                            detail="divisibility hypothesis fails")
    try:
        sp = realize(b, d, req.prime)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err))
    pot = random_potential(sp, req.trunc, req.seed)
    swp = SpeciesWithPotential.build(sp, req.trunc, pot)
    sid = uuid.uuid4().hex
    sess = _Session(sid, b, d, swp, req.seed)
    _sessions[sid] = sess
    return sess.to_json()


@app.get("/api/session/{sid}")
def get_session(sid: str):
    return _get_session(sid).to_json()


@app.post("/api/session/{sid}/mutate")
def mutate_session(sid: str, req: MutateRequest):
    sess = _get_session(sid)
    n = sess.current.species.n
    if not 1 <= req.k <= n:
        raise HTTPException(status_code=400,
                            detail=f"vertex must be in 1..{n}")
    if sess.history and sess.history[-1] == req.k:
        raise HTTPException(
            status_code=409,
            detail="immediate repeat of a vertex is not a valid step; "
                   "use undo instead")
    if sess.steps and not sess.steps[-1]["two_acyclic"]:
        raise HTTPException(
            status_code=409,
            detail="current state is not 2-acyclic; further mutation "
                   "is undefined")
    res = mutate(sess.current, req.k, seed=sess.seed)
    sess.states.append(res.result)
    sess.matrices.append(res.matrix)
    sess.history.append(req.k)
    sess.steps.append({
        "vertex": req.k,
        "split_ok": res.split_ok,
        "two_acyclic": res.two_acyclic,
        "trivial_rank": res.trivial_rank,
        "matrix": res.matrix.to_json(),
        "failure": res.failure,
    })
    return sess.to_json()


@app.post("/api/session/{sid}/undo")
def undo_session(sid: str):
    sess = _get_session(sid)
    if not sess.history:
        raise HTTPException(status_code=409, detail="nothing to undo")
    sess.states.pop()
    sess.matrices.pop()
    sess.history.pop()
    sess.steps.pop()
    return sess.to_json()


@app.get("/api/session/{sid}/potential")
def get_potential(sid: str):
    sess = _get_session(sid)
    pot = sess.current.potential
    return {
        "id": sess.id,
        "trunc": sess.current.trunc,
        "terms_by_degree": pot.term_count_by_degree(),
        "potential": pot.to_json(),
    }
