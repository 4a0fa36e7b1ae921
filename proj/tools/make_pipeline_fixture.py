#!/usr/bin/env python3
"""Generate the small events/query-log fixture used by the pipeline tests.

The output is fully determined by --seed. Each event drives a self-exciting
burst of queries built from its title words; unrelated background queries
are mixed in so the similarity threshold has something to reject.
"""
import argparse
import json
import math
import pathlib
import random

EVENTS = [
    (101, "Trump wins Indiana primary", "Donald Trump won the Indiana Republican primary."),
    (102, "Captain America Civil War opens", "Marvel film tops the weekend box office."),
    (103, "Kentucky Derby won by Nyquist", "Unbeaten colt Nyquist takes the Kentucky Derby."),
    (104, "Fort McMurray wildfire evacuation", "Wildfire forces evacuation of Fort McMurray in Alberta."),
]
EXTRA_WORDS = ["news", "live", "results", "video", "tickets", "update", "map", "2016", "latest", "photos"]
BACKGROUND = ["weather tomorrow", "cheap flights", "pizza near me", "nba scores", "mothers day gifts",
              "tax refund status", "gas prices", "movie times"]

START_EPOCH = 1462060800  # 2016-05-01 00:00 UTC
HOURS = 240


def query_for(title, rng):
    words = [w.lower() for w in title.split()]
    picked = rng.sample(words, k=rng.randint(1, min(3, len(words))))
    if rng.random() < 0.6:
        picked.append(rng.choice(EXTRA_WORDS))
    return " ".join(picked)


def hawkes_times(rng, eta, branch, decay, horizon):
    """Cluster representation: immigrants at rate eta, each point has Poisson(branch) children."""
    times = []
    t = rng.expovariate(eta)
    pending = []
    while t < horizon:
        pending.append(t)
        t += rng.expovariate(eta)
    while pending:
        parent = pending.pop()
        times.append(parent)
        children = poisson(rng, branch)
        for _ in range(children):
            child = parent + rng.expovariate(decay)
            if child < horizon:
                pending.append(child)
    return sorted(times)


def poisson(rng, lam):
    limit, k, prod = math.exp(-lam), 0, rng.random()
    while prod > limit:
        k += 1
        prod *= rng.random()
    return k


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=pathlib.Path, required=True)
    parser.add_argument("--seed", type=int, default=20160501)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    with open(args.out_dir / "events.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for event_id, title, body in EVENTS:
            f.write(json.dumps({"id": event_id, "title": title, "body": body,
                                "timestamp": START_EPOCH}) + "\n")

    rows = []
    for _, title, _ in EVENTS:
        for t in hawkes_times(rng, eta=0.25, branch=0.6, decay=1.0, horizon=HOURS):
            rows.append((query_for(title, rng), START_EPOCH + int(t * 3600)))
    for _ in range(80):
        rows.append((rng.choice(BACKGROUND), START_EPOCH + rng.randrange(HOURS * 3600)))
    rows.sort(key=lambda r: (r[1], r[0]))

    with open(args.out_dir / "queries.tsv", "w", encoding="utf-8", newline="\n") as f:
        for text, ts in rows:
            f.write(f"{text}\t{ts}\n")


if __name__ == "__main__":
    main()
