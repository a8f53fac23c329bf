"""Synthetic movie records with injected, perturbed duplicates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import accumulate

from .core import INTEGER, STRING, Dataset, Record, TrainingSet, ValidationError

SCHEMA = {"title": STRING, "director": STRING, "year": INTEGER, "runtime": INTEGER}

TITLE_WORDS = """
the a of and in night day last first dark light red blue black white golden silver
love war man woman city king queen house road river star dead life time return
secret lost final great little big old new wild strange hidden broken silent
shadow dream heart fire ice storm blood moon sun sky sea mountain island desert
garden forest winter summer spring autumn ghost angel devil hero stranger
journey escape mission story legend game world kingdom empire circle line
edge dawn midnight morning evening road train ship flight bridge tower wall
door window mirror letter song dance voice whisper promise memory echo
child brother sister father mother family friend enemy lover soldier doctor
thief hunter driver captain prince princess witch wizard dragon tiger wolf
horse bird snake spider rose lily diamond gold crown sword gun bullet
street avenue harbor valley canyon paradise heaven hell planet galaxy
machine robot code signal zero one two three seven ten hundred thousand
american french italian chinese english western eastern northern southern
""".split()

FIRST_NAMES = """
james john robert michael william david richard joseph thomas charles
mary patricia jennifer linda elizabeth barbara susan jessica sarah karen
steven paul andrew kenneth george edward brian ronald anthony kevin
nancy lisa betty margaret sandra ashley dorothy kimberly emily donna
akira ingmar federico jean luc pedro sofia agnes werner fritz
""".split()

LAST_NAMES = """
smith johnson williams brown jones garcia miller davis rodriguez martinez
hernandez lopez gonzalez wilson anderson thomas taylor moore jackson martin
lee perez thompson white harris sanchez clark ramirez lewis robinson
walker young allen king wright scott torres nguyen hill flores
green adams nelson baker hall rivera campbell mitchell carter roberts
kurosawa bergman fellini godard almodovar coppola varda herzog lang
scorsese spielberg kubrick hitchcock wilder hawks ford huston capra welles
""".split()


@dataclass
class SynthConfig:
    n_base: int = 1000
    dup_rate: float = 0.1
    skew: float = 0.3
    perturbations: dict = field(default_factory=lambda: {
        "title_null": 0.05,
        "title_truncate": 0.3,
        "director_null": 0.1,
        "director_typo": 0.1,
        "year_shift": 0.3,
        "runtime_shift": 0.5,
    })
    director_null: float = 0.05
    seed: int = 42

    def validate(self) -> None:
        probs = {"dup_rate": self.dup_rate, "skew": self.skew, "director_null": self.director_null}
        probs.update(self.perturbations)
        for name, p in probs.items():
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {p}")
        if self.n_base < 0:
            raise ValidationError("n_base must be >= 0")


def _zipf_weights(n: int, s: float) -> list[float]:
    return [1.0 / (rank + 1) ** s for rank in range(n)]


def _title(rng: random.Random) -> str:
    n = rng.choices((1, 2, 3, 4), weights=(3, 4, 2, 1))[0]
    return " ".join(rng.choice(TITLE_WORDS) for _ in range(n)).title()


def _typo(rng: random.Random, text: str) -> str:
    if len(text) < 3:
        return text
    i = rng.randrange(1, len(text) - 1)
    return text[:i] + text[i + 1:]


def _perturb(rng: random.Random, attrs: dict, p: dict) -> dict:
    out = dict(attrs)
    if out["title"] is not None:
        if rng.random() < p.get("title_null", 0.0):
            out["title"] = None
        elif rng.random() < p.get("title_truncate", 0.0):
            words = out["title"].split()
            out["title"] = " ".join(words[:-1]) if len(words) > 1 else _typo(rng, words[0])
    if out["director"] is not None:
        if rng.random() < p.get("director_null", 0.0):
            out["director"] = None
        elif rng.random() < p.get("director_typo", 0.0):
            out["director"] = _typo(rng, out["director"])
    if rng.random() < p.get("year_shift", 0.0):
        out["year"] += rng.choice((-1, 1))
    if rng.random() < p.get("runtime_shift", 0.0):
        out["runtime"] += rng.choice((-2, -1, 1, 2))
    return out


def gen_synthetic(config: SynthConfig) -> tuple[Dataset, TrainingSet]:
    """Base movies plus one perturbed copy for ``round(n_base * dup_rate)`` of them."""
    config.validate()
    rng = random.Random(config.seed)
    n_dir = max(20, config.n_base // 8)
    directors = [f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}".title() for _ in range(n_dir)]
    dir_cum = list(accumulate(_zipf_weights(n_dir, 0.9)))
    years = list(range(1920, 2021))
    year_cum = list(accumulate(1.0 + (y - 1920) / 10.0 for y in years))
    base = []
    for i in range(config.n_base):
        attrs = {
            "title": None if rng.random() < config.skew else _title(rng),
            "director": None if rng.random() < config.director_null else rng.choices(directors, cum_weights=dir_cum)[0],
            "year": rng.choices(years, cum_weights=year_cum)[0],
            "runtime": max(60, min(220, int(rng.gauss(105, 20)))),
        }
        base.append(Record(f"m{i:06d}", attrs))
    n_dup = round(config.n_base * config.dup_rate)
    chosen = sorted(rng.sample(range(config.n_base), n_dup))
    dups, pairs = [], []
    for j, i in enumerate(chosen):
        rec = Record(f"d{j:06d}", _perturb(rng, dict(base[i].attrs), config.perturbations))
        dups.append(rec)
        pairs.append((base[i].id, rec.id))
    records = base + dups
    rng.shuffle(records)
    return Dataset(dict(SCHEMA), records), TrainingSet(tuple(pairs))
