"""Generate the synthetic bilingual (English/Spanish) survey used by the tests.

Respondents rate four aspects on a 0-10 scale and write a short "what should
be improved" answer. The lower a score, the more likely the answer talks
about that aspect, using language-specific vocabulary. A few answers are
empty or contain only stopwords, and about 3% of scores are missing.

    python scripts/make_synthetic_fixture.py [OUT_DIR]
"""
from __future__ import annotations

import csv
import sys
from pathlib import Path

import numpy as np

ASPECTS = ["air_conditioning", "toilet_cleanliness", "cabin_room", "staff_language"]

VOCAB = {
    "en": {
        "air_conditioning": ["air", "conditioning", "temperature", "hot", "cold", "ventilation"],
        "toilet_cleanliness": ["toilets", "cleanliness", "dirty", "smell", "shower"],
        "cabin_room": ["space", "cabin", "size", "luggage", "small", "bed"],
        "staff_language": ["staff", "english", "language", "service", "rude"],
        "generic": ["price", "food", "train", "delay", "noise", "coffee", "window"],
        "stop": ["the", "is", "and", "too", "a", "of", "very"],
    },
    "es": {
        "air_conditioning": ["aire", "acondicionado", "temperatura", "calor", "frío", "climatización", "ventilación"],
        "toilet_cleanliness": ["aseos", "limpieza", "baños", "sucio", "olor"],
        "cabin_room": ["espacio", "cabina", "cabinas", "maletas", "pequeño", "cama"],
        "staff_language": ["personal", "idioma", "servicio"],
        "generic": ["precio", "comida", "tren", "retraso", "ruido", "café", "ventana"],
        "stop": ["el", "la", "es", "muy", "y", "de", "los"],
    },
}

# mean satisfaction per aspect; English speakers rate the staff's language lower
MEANS = {"en": [6.5, 6.3, 5.7, 6.0], "es": [6.5, 6.2, 5.3, 7.7]}
SIZES = {"en": 180, "es": 320}


def make_sample(lang: str, rng: np.random.Generator):
    n = SIZES[lang]
    vocab = VOCAB[lang]
    latent = rng.normal(size=(n, 1))
    raw = np.asarray(MEANS[lang]) + 1.2 * latent + 1.8 * rng.normal(size=(n, 4))
    scores = np.clip(np.rint(raw), 0, 10).astype(int)
    travel_class = rng.choice(["tourist", "first"], size=n, p=[0.7, 0.3])

    texts = []
    for i in range(n):
        r = rng.random()
        if r < 0.03:
            texts.append("")
            continue
        if r < 0.05:
            texts.append(" ".join(rng.choice(vocab["stop"], size=2)))
            continue
        words = []
        dissat = (10 - scores[i]) / 10.0
        for a, aspect in enumerate(ASPECTS):
            if rng.random() < 0.08 + 0.6 * dissat[a] ** 2:
                k = 1 + rng.poisson(0.8)
                words.extend(rng.choice(vocab[aspect], size=k))
        if travel_class[i] == "first" and rng.random() < 0.4:
            words.append(vocab["generic"][0])
        if not words or rng.random() < 0.3:
            words.extend(rng.choice(vocab["generic"], size=1 + rng.poisson(0.5)))
        for _ in range(rng.poisson(1.0)):
            words.insert(int(rng.integers(0, len(words) + 1)), str(rng.choice(vocab["stop"])))
        text = " ".join(words)
        text = text[0].upper() + text[1:]
        if rng.random() < 0.3:
            text += rng.choice(["!", ".", "...", "?"])
        texts.append(text)

    ids = [f"{lang}{i:04d}" for i in range(n)]
    cells = scores.astype(object)
    cells[rng.random(size=cells.shape) < 0.03] = ""
    return ids, texts, cells, travel_class


def write(out: Path, seed: int = 2024) -> None:
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for lang in ("en", "es"):
        ids, texts, cells, klass = make_sample(lang, rng)
        with open(out / f"{lang}_responses.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "text"])
            w.writerows(zip(ids, texts))
        with open(out / f"{lang}_scores.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", *ASPECTS, "travel_class"])
            for rid, row, c in zip(ids, cells, klass):
                w.writerow([rid, *row, c])
        with open(out / f"stopwords_{lang}.txt", "w", encoding="utf-8") as fh:
            fh.write(f"# {lang} stopwords, one per line\n")
            fh.write("\n".join(VOCAB[lang]["stop"]) + "\n")


if __name__ == "__main__":
    write(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "data" / "synthetic_bilingual")
