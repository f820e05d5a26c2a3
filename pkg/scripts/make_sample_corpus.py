"""Regenerate src/sociogram/data/sample_edges.csv (200 synthetic tweets).

The corpus is invented: screen names are random handles, texts are stitched
from short phrase templates. It has a retweet hub, a couple of tight circles,
duplicates, self-tweets and isolated-ish pairs so every report section has
something to show.

    python scripts/make_sample_corpus.py
"""

import csv
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "sociogram" / "data" / "sample_edges.csv"

OPENERS = [
    "feeling so alone tonight",
    "you are not alone",
    "reach out if you need help",
    "thinking about everything again",
    "so tired of crying",
    "being bullied at school again",
    "stop cutting myself is the goal",
    "my friend is struggling",
    "grateful for the support",
    "please call the hotline",
    "lost my brother last year",
    "can not sleep insomnia again",
    "proud of how far you have come",
    "angry and hurt and done",
    "calm breathe it will pass",
    "suicide prevention starts with listening",
    "thoughts of killing myself again",
    "want to commit to getting better",
    "my mom does not understand",
    "the pills are not helping",
]
CLOSERS = ["", " #mentalhealth", " #youmatter", " please", " love you all", " #suicideprevention", " so sad", " stay safe"]


def main(seed: int = 2015) -> None:
    rng = random.Random(seed)
    users = [f"user{i:03d}" for i in range(120)]
    hub = "prevention_org"
    circles = [users[0:6], users[6:12]]
    start = datetime(2015, 5, 27, tzinfo=timezone.utc)
    rows = []

    def text() -> str:
        return rng.choice(OPENERS) + rng.choice(CLOSERS)

    # inward hub: many users mention/retweet the org
    for u in users[12:72]:
        rows.append((u, hub, rng.choice(["retweet", "mention"]), text()))
    # org replies to a few
    for u in users[12:20]:
        rows.append((hub, u, "reply", text()))
    # two circles talking among themselves
    for circle in circles:
        for a in circle:
            for b in rng.sample([c for c in circle if c != a], 3):
                rows.append((a, b, rng.choice(["mention", "reply"]), text()))
    # loose pairs and chains
    for a, b in zip(users[72:110:2], users[73:111:2]):
        rows.append((a, b, "mention", text()))
    # self-tweets
    for u in users[110:120]:
        rows.append((u, u, "tweet", text()))
    # exact duplicate pairs
    rows += [rows[3], rows[10], rows[70], rows[75], rows[80]]
    rows = rows[:200]
    while len(rows) < 200:
        a, b = rng.sample(users[72:110], 2)
        rows.append((a, b, "retweet", text()))

    with open(OUT, "w", newline="", encoding="utf-8") as handle:
        w = csv.writer(handle, lineterminator="\n")
        w.writerow(["source", "target", "kind", "text", "timestamp"])
        for i, (s, t, k, txt) in enumerate(rows):
            stamp = (start + timedelta(minutes=7 * i)).isoformat().replace("+00:00", "Z")
            w.writerow([s, t, k, txt, stamp])


if __name__ == "__main__":
    main()
