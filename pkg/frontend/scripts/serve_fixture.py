"""Start the retrieval service on the planted test corpus for the UI contract test.

The engine is configured so the candidate pool covers the whole knowledge
base, which makes the suggestion slate exactly 20 concepts for every topic
query in the fixture.
"""

import argparse
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))

import uvicorn
from fixtures import make_planted

from conceptir.api import create_app
from conceptir.engine import Engine, EngineConfig
from conceptir.selection import ConceptSelectionParams
from conceptir.session import SessionStore


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8741)
    args = parser.parse_args()

    workdir = Path(tempfile.mkdtemp(prefix="conceptir-fixture-"))
    paths = make_planted().write(workdir)
    config = EngineConfig(
        selection=ConceptSelectionParams(
            top_n_docs=200, slate_size=20, candidate_pool_size=200
        )
    )
    engine = Engine.build(paths["corpus"], paths["kb"], config=config)
    app = create_app(SessionStore(engine))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
