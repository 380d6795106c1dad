from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from core import __version__


def ensure_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)


def read_text_file(path: Path) -> str:
    with path.open('r', encoding='utf-8') as f:
        return f.read()


def build_metadata(**fields: Any) -> Dict[str, Any]:
    """Metadata block embedded in every artifact. None-valued fields are kept so the schema is stable."""
    meta = dict(fields)
    meta['tool_version'] = __version__
    return meta


def write_json(path: Path, data: Dict[str, Any]) -> None:
    with path.open('w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write('\n')


def write_csv(path: Path, frame: pd.DataFrame, metadata: Optional[Dict[str, Any]] = None) -> None:
    # Leading "# {json}" line carries the run metadata; floats keep 17 significant digits.
    with path.open('w', encoding='utf-8', newline='') as f:
        if metadata is not None:
            f.write('# ' + json.dumps(metadata, ensure_ascii=False, sort_keys=True) + '\n')
        frame.to_csv(f, index=False, float_format='%.17g', lineterminator='\n')


def read_csv_metadata(path: Path) -> Optional[Dict[str, Any]]:
    with path.open('r', encoding='utf-8') as f:
        first = f.readline()
    if first.startswith('# '):
        return json.loads(first[2:])
    return None


def _norm(part: str) -> str:
    return str(part).replace('/', '_').replace(':', '_').replace(' ', '_')


def result_filename(kind: str, dataset: str, method: str, results_dir: Path, suffix: str = '.csv', **tags: Any) -> Path:
    # Deterministic names (no timestamp) so reruns overwrite byte-identical files
    parts = [_norm(kind), _norm(dataset.upper()), _norm(method)]
    parts.extend(f"{k}{_norm(v)}" for k, v in tags.items() if v is not None)
    return results_dir / ("_".join(parts) + suffix)
