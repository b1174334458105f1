"""Game files for the worked examples, usable as ``@name`` on the command line."""
from importlib import resources


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir()
                  if p.name.endswith(".json"))


def path(name: str):
    p = resources.files(__name__) / f"{name}.json"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled game {name!r}; available: {', '.join(names())}")
    return p
