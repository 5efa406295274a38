"""Results files: a commented JSON metadata block followed by CSV records.

::

    # swarmtwin-results v1
    # {
    #  "tool": "swarmtwin", ...
    # }
    spec_id,run_id,round,mean_true_distance,...

Rows cover rounds 0 (initial state) through the longest run of each spec.
Shorter runs are carried forward with ``padded=1``. Floats are written with
``repr`` so values survive a round trip exactly. ``pandas.read_csv(path,
comment="#")`` reads the table.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from swarmtwin import __version__
from swarmtwin.config import batch_to_dict
from swarmtwin.comms import scheme_to_dict
from swarmtwin.montecarlo import BatchResult

MAGIC = "# swarmtwin-results v1"
COLUMNS = (
    "spec_id", "run_id", "round", "mean_true_distance", "min_true_distance",
    "swarm_best_est", "cumulative_tx", "padded",
)


def _params_doc(params: dict) -> dict:
    return {k: (v if k != "scheme" or isinstance(v, dict) else scheme_to_dict(v)) for k, v in params.items()}


def metadata(result: BatchResult) -> dict:
    batch = result.batch
    return {
        "tool": "swarmtwin",
        "version": __version__,
        "master_seed": batch.base.master_seed,
        "config": batch_to_dict(batch),
        "specs": [
            {"spec_id": s.spec.index, "label": s.spec.label, "params": _params_doc(s.spec.params),
             "config_digest": s.spec.config.digest()}
            for s in result.specs
        ],
        "columns": list(COLUMNS),
    }


def render(result: BatchResult) -> str:
    buf = io.StringIO()
    buf.write(MAGIC + "\n")
    for line in json.dumps(metadata(result), indent=1).splitlines():
        buf.write("# " + line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for summary in result.specs:
        length = len(summary.mean_curve)
        for run_id, r in enumerate(summary.runs):
            last = r.rounds_executed
            mean, mn, best, tx = (a.tolist() for a in (r.mean_true_distance, r.min_true_distance,
                                                       r.swarm_best_est, r.cumulative_tx))
            for t in range(length):
                k = min(t, last)
                w.writerow((summary.spec.index, run_id, t, repr(mean[k]), repr(mn[k]),
                            repr(best[k]), tx[k], int(t > last)))
    return buf.getvalue()


def write(result: BatchResult, path: str | Path) -> None:
    """Write atomically: the target either appears complete or not at all."""
    path = Path(path)
    text = render(result)
    fd, tmp = tempfile.mkstemp(prefix=".swarmtwin-", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_metadata(path: str | Path) -> dict:
    lines = []
    with open(path) as fh:
        if fh.readline().rstrip("\n") != MAGIC:
            raise ValueError(f"{path} is not a swarmtwin results file")
        for line in fh:
            if not line.startswith("# "):
                break
            lines.append(line[2:])
    return json.loads("".join(lines))
