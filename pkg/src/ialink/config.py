"""Scenario configuration files.

Plain ``key = value`` text, one pair per line, ``#`` comments allowed.
Keys mirror the :class:`~ialink.channel.Scenario` fields:

::

    # 3-user 2x2 single-stream network
    k = 3
    nt = 2
    nr = 2
    d = 1,1,1          # or a single int for symmetric streams
    alpha = 0.5,0.0    # re,im pair
    beta = 0.1
    gamma_db = 0,5,10,15,20,25,30,35,40
    trials = 20000
    seed = 42

``k``, ``nt`` and ``nr`` are required; everything else falls back to the
Scenario defaults.
"""

from __future__ import annotations

import os

from .channel import Scenario

_REQUIRED = ("k", "nt", "nr")
_KNOWN = {"k", "nt", "nr", "d", "alpha", "beta", "gamma_db", "trials", "seed"}


class ConfigError(ValueError):
    """Malformed scenario configuration."""


def parse_scenario_text(text: str, source: str = "<string>") -> Scenario:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in _KNOWN:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        pairs[key] = value
    for key in _REQUIRED:
        if key not in pairs:
            raise ConfigError(f"{source}: missing required key {key!r}")
    try:
        k = int(pairs["k"])
        nt = int(pairs["nt"])
        nr = int(pairs["nr"])
        if "d" in pairs:
            parts = [int(x) for x in pairs["d"].split(",")]
            d = tuple(parts) if len(parts) > 1 else (parts[0],) * k
        else:
            d = (1,) * k
        alpha = 0.0 + 0.0j
        if "alpha" in pairs:
            re_im = [float(x) for x in pairs["alpha"].split(",")]
            if len(re_im) == 1:
                re_im.append(0.0)
            if len(re_im) != 2:
                raise ConfigError(f"{source}: alpha must be a re,im pair")
            alpha = complex(re_im[0], re_im[1])
        kwargs = dict(k=k, nt=nt, nr=nr, d=d, alpha=alpha)
        if "beta" in pairs:
            kwargs["beta"] = float(pairs["beta"])
        if "gamma_db" in pairs:
            kwargs["gamma_db"] = tuple(float(x) for x in pairs["gamma_db"].split(","))
        if "trials" in pairs:
            kwargs["trials"] = int(pairs["trials"])
        if "seed" in pairs:
            kwargs["seed"] = int(pairs["seed"])
        return Scenario(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def parse_scenario(path: str | os.PathLike) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario_text(fh.read(), source=str(path))


def scenario_to_text(sc: Scenario) -> str:
    lines = [
        f"k = {sc.k}",
        f"nt = {sc.nt}",
        f"nr = {sc.nr}",
        "d = " + ",".join(str(x) for x in sc.d),
        f"alpha = {sc.alpha.real:.12g},{sc.alpha.imag:.12g}",
        f"beta = {sc.beta:.12g}",
        "gamma_db = " + ",".join(f"{g:.12g}" for g in sc.gamma_db),
        f"trials = {sc.trials}",
        f"seed = {sc.seed}",
    ]
    return "\n".join(lines) + "\n"
