import random

from fsts.dsl import DslError, parse
from fsts.propsuite import CORPUS
from fsts.propsuite.runner import corpus_text

ROUNDS = 10_000
PIECES = ["(", ")", "[", "]", "{", "}", ";", ",", ":", "~", "∨", "∧", "|", "&", "=", "1/0", "0.", "1.5", "9/7",
          "X(", "tail", "n0", "n99", "base", "grades", "point", "fset", "topology", "expect", "#", "\n", "é", "\x00"]


def mutate(rng: random.Random, text: str) -> str:
    for _ in range(rng.randint(1, 4)):
        i = rng.randrange(len(text) + 1)
        op = rng.randrange(4)
        if op == 0:
            text = text[:i] + text[i + rng.randint(1, 8):]
        elif op == 1:
            text = text[:i] + rng.choice(PIECES) + text[i:]
        elif op == 2:
            j = rng.randrange(len(text) + 1)
            text = text[:i] + text[min(i, j):max(i, j)] + text[i:]
        else:
            text = text[:i] + chr(rng.randrange(32, 0x3000)) + text[i + 1:]
    return text


def fuzz(rounds=ROUNDS, seed=1):
    rng = random.Random(seed)
    seeds = [corpus_text(n) for n in CORPUS]
    stats = {"accepted": 0, "rejected": 0, "bad_span": []}
    for _ in range(rounds):
        text = mutate(rng, rng.choice(seeds))
        try:
            parse(text)
            stats["accepted"] += 1
        except DslError as exc:
            stats["rejected"] += 1
            s, size = exc.span, len(text.encode("utf-8"))
            if not (0 <= s.start <= s.end <= size and s.line >= 1 and s.column >= 1):
                stats["bad_span"].append((text, exc.render()))
    return stats


def test_mutated_inputs_never_crash():
    stats = fuzz()
    assert stats["accepted"] + stats["rejected"] == ROUNDS
    assert stats["rejected"] > ROUNDS // 2 and stats["accepted"] > 0
    assert not stats["bad_span"], stats["bad_span"][:3]
