import json
import os
import time

import pytest

from twodist.discharging import ForbiddenDB
from twodist.pipeline import CERT_FORMAT, Manifest, run_reducibility


@pytest.fixture(scope="session")
def certification():
    """Reducibility certification shared by the whole session.

    Recomputed from scratch unless TWODIST_CERT_FILE points at an artifact
    from an earlier run (a development shortcut; the acceptance module then
    skips the wall-time accounting since nothing was timed).
    """
    path = os.environ.get("TWODIST_CERT_FILE")
    if path and os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        assert data.get("format") == CERT_FORMAT
        results = [
            {"claim": claim, "status": status}
            for claim, status in sorted(data["results"].items())
        ]
        return {"results": results, "seconds": None, "fresh": False}
    t0 = time.time()
    results = run_reducibility(Manifest(outdir=".", jobs=os.cpu_count() or 1))
    return {"results": results, "seconds": time.time() - t0, "fresh": True}


@pytest.fixture(scope="session")
def certified_db(certification):
    certs = {r["claim"]: r["status"] for r in certification["results"]}
    return ForbiddenDB.standard(certs)
