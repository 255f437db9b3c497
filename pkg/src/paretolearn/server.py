"""Local HTTP service exposing a trained model for trade-off exploration.

The server loads one immutable snapshot (model, surrogates, archive) from a
final checkpoint at startup and answers read-only JSON requests::

    GET /health                      -> {"status": "ok"}
    GET /meta                        -> problem name, dimensions, bounds
    GET /solution?lambda=0.3,0.7     -> mapped x with predicted mean/std
    GET /front?samples=200           -> sampled front rows
    GET /archive                     -> evaluated X/Y pairs

Responses carry permissive CORS headers so a local browser UI on another
port can call it directly.  There are no mutation endpoints.
"""

import json
import logging
import urllib.parse
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from . import campaign
from .problems import ProblemSpec
from .psmodel import ParetoSetModel
from .surrogate import SurrogateBundle

__all__ = ["Snapshot", "load_snapshot", "make_server"]

logger = logging.getLogger(__name__)

MAX_FRONT_SAMPLES = 10_000
DEFAULT_FRONT_SAMPLES = 200


@dataclass(frozen=True)
class Snapshot:
    """Immutable serving state loaded once at startup."""

    model: ParetoSetModel
    surrogates: SurrogateBundle
    X: np.ndarray
    Y: np.ndarray
    problem: ProblemSpec


def load_snapshot(checkpoint_path) -> Snapshot:
    model, surrogates, X, Y, problem, _ = campaign.load_final_checkpoint(
        checkpoint_path
    )
    return Snapshot(model=model, surrogates=surrogates, X=X, Y=Y,
                    problem=problem)


class _BadRequest(ValueError):
    pass


def _parse_lambda(query: dict, m: int) -> np.ndarray:
    raw = query.get("lambda")
    if not raw:
        raise _BadRequest("missing required query parameter 'lambda'")
    try:
        lam = np.asarray([float(v) for v in raw[0].split(",")], dtype=float)
    except ValueError:
        raise _BadRequest(f"could not parse lambda={raw[0]!r}") from None
    if lam.shape != (m,):
        raise _BadRequest(f"lambda must have {m} components, got {lam.size}")
    if not np.all(np.isfinite(lam)):
        raise _BadRequest("lambda components must be finite")
    if np.any(lam < 0.0):
        raise _BadRequest("lambda components must be nonnegative")
    total = lam.sum()
    if total <= 0.0:
        raise _BadRequest("lambda must have a positive sum")
    return lam / total


def _parse_samples(query: dict) -> int:
    raw = query.get("samples")
    if not raw:
        return DEFAULT_FRONT_SAMPLES
    try:
        samples = int(raw[0])
    except ValueError:
        raise _BadRequest(f"could not parse samples={raw[0]!r}") from None
    if not 1 <= samples <= MAX_FRONT_SAMPLES:
        raise _BadRequest(f"samples must be in [1, {MAX_FRONT_SAMPLES}]")
    return samples


class _Handler(BaseHTTPRequestHandler):
    snapshot: Snapshot = None  # set by make_server on the subclass

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # route request lines to logging
        logger.debug("%s - %s", self.address_string(), fmt % args)

    def _send_json(self, payload, status: int = 200) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._send_cors()
        self.end_headers()
        self.wfile.write(body)

    def _send_cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._send_cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urllib.parse.urlsplit(self.path)
        query = urllib.parse.parse_qs(url.query)
        try:
            handler = _ROUTES.get(url.path)
            if handler is None:
                self._send_json({"error": f"unknown path {url.path!r}"}, 404)
                return
            self._send_json(handler(self.snapshot, query))
        except _BadRequest as exc:
            self._send_json({"error": str(exc)}, 400)
        except BrokenPipeError:
            pass
        except Exception:
            logger.exception("request failed: %s", self.path)
            self._send_json({"error": "internal server error"}, 500)


def _route_health(snapshot: Snapshot, query: dict) -> dict:
    del snapshot, query
    return {"status": "ok"}


def _route_meta(snapshot: Snapshot, query: dict) -> dict:
    del query
    p = snapshot.problem
    return {
        "problem": p.name,
        "n": p.n,
        "m": p.m,
        "bounds": {
            "lower": p.lower_bounds.tolist(),
            "upper": p.upper_bounds.tolist(),
        },
        "reference_point": p.reference_point.tolist(),
    }


def _route_solution(snapshot: Snapshot, query: dict) -> dict:
    lam = _parse_lambda(query, snapshot.problem.m)
    x = snapshot.model.forward(lam)
    mean, std = snapshot.surrogates.predict(x[None, :])
    return {
        "lambda": lam.tolist(),
        "x": x.tolist(),
        "mean": mean[0].tolist(),
        "std": std[0].tolist(),
    }


def _route_front(snapshot: Snapshot, query: dict) -> list:
    samples = _parse_samples(query)
    report = campaign.export_front(snapshot.model, snapshot.surrogates, samples)
    return [
        {
            "lambda": report["preferences"][k].tolist(),
            "x": report["x"][k].tolist(),
            "mean": report["mean"][k].tolist(),
            "std": report["std"][k].tolist(),
            "non_dominated": bool(report["non_dominated"][k]),
        }
        for k in range(samples)
    ]


def _route_archive(snapshot: Snapshot, query: dict) -> dict:
    del query
    return {"X": snapshot.X.tolist(), "Y": snapshot.Y.tolist()}


_ROUTES = {
    "/health": _route_health,
    "/meta": _route_meta,
    "/solution": _route_solution,
    "/front": _route_front,
    "/archive": _route_archive,
}


def make_server(snapshot: Snapshot, host: str, port: int) -> ThreadingHTTPServer:
    """Bind a threading HTTP server serving the given snapshot."""
    handler = type("SnapshotHandler", (_Handler,), {"snapshot": snapshot})
    return ThreadingHTTPServer((host, port), handler)
