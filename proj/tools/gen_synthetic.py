#!/usr/bin/env python3
"""Writes the synthetic two-sense corpus used by report-table and the tests.

Each ambiguous noun gets two topics with disjoint vocabularies and an exact
planted split of its sentences between them. Modifiers only ever occur with
nouns of one topic, adjectives right before the noun and verbs in
"noun that verb" clauses, so their sense tensors point into that topic.

    python3 tools/gen_synthetic.py [outdir]
"""

import random
import sys
from pathlib import Path

SEED = 20161015
NOUN_SENTENCES = 120
MODIFIER_SENTENCES = 30
BACKGROUND_SENTENCES = 60

# noun -> (sense A, sense B); sense = (label, share, topic nouns, other verbs,
# other adjectives, relative verb, adjective)
NOUNS = {
    "organ": (
        ("music", 0.6, "church piano melody choir hymn concert pipe chord keyboard recital".split(),
         "play resonate perform tune".split(), "grand loud solemn".split(), "enchant", "music"),
        ("body", 0.4, "liver kidney tissue surgeon transplant donor patient heart lung clinic".split(),
         "fail heal remove transplant".split(), "vital internal diseased".split(), "ache", "body"),
    ),
    "vessel": (
        ("anatomy", 0.4, "artery vein capillary clot plasma pressure circulation wall cell aorta".split(),
         "constrict dilate rupture narrow".split(), "coronary vascular inflamed".split(), "swell", "blood"),
        ("ship", 0.6, "harbour crew cargo fleet sea captain deck port voyage hull".split(),
         "dock anchor depart steer".split(), "merchant wooden sturdy".split(), "sail", "naval"),
    ),
    "queen": (
        ("insect", 0.45, "hive colony bee worker wax larva drone honey nectar swarm".split(),
         "lay hatch buzz feed".split(), "winged fertile busy".split(), "fly", "fair"),
        ("royal", 0.55, "throne crown palace court monarch kingdom chess king knight castle".split(),
         "reign command crown summon".split(), "royal regal noble".split(), "rule", "chess"),
    ),
    "nail": (
        ("metal", 0.65, "hammer screw plank carpenter timber bolt iron steel joint workshop".split(),
         "bend drive fasten pierce".split(), "sharp steel loose".split(), "gleam", "rusty"),
        ("finger", 0.35, "thumb polish cuticle manicure hand toe skin varnish salon file".split(),
         "break chip paint trim".split(), "painted brittle long".split(), "grow", "finger"),
    ),
    "bank": (
        ("river", 0.5, "river shore mud reed flood stream meadow current willow riverbed".split(),
         "erode flood slope crumble".split(), "muddy grassy steep".split(), "overflow", "water"),
        ("finance", 0.5, "money account loan deposit interest mortgage cash credit savings teller".split(),
         "lend invest charge approve".split(), "central commercial private".split(), "loan", "financial"),
    ),
}

STOPLIKE = ["the_DT", "a_DT", "in_IN", "of_IN", "with_IN", "and_CC"]


def word(lemma, tag):
    return f"{lemma}_{tag}"


def topic_words(rng, sense, k):
    _, _, nouns, verbs, adjs, _, _ = sense
    out = [word(n, "NN") for n in rng.sample(nouns, k)]
    out.append(word(rng.choice(verbs), "VBZ"))
    if rng.random() < 0.5:
        out.insert(0, word(rng.choice(adjs), "JJ"))
    return out


def sprinkle(rng, head, tokens):
    out = list(head)
    for t in tokens:
        if rng.random() < 0.4:
            out.append(rng.choice(STOPLIKE))
        out.append(t)
    return out


def noun_sentence(rng, noun, sense):
    label, _, nouns, _, _, rel_verb, adj = sense
    head = [word(noun, "NN")]
    r = rng.random()
    if r < 0.15:
        head = [word(adj, "JJ"), word(noun, "NN")]
    elif r < 0.30:
        head = [word(noun, "NN"), "that_WDT", word(rel_verb, "VBZ")]
    return sprinkle(rng, head, topic_words(rng, sense, rng.randint(3, 5)))


def modifier_sentence(rng, sense, relative):
    _, _, nouns, _, _, rel_verb, adj = sense
    arg = rng.choice(nouns)
    if relative:
        head = [word(arg, "NN"), "that_WDT", word(rel_verb, "VBZ")]
    else:
        head = [word(adj, "JJ"), word(arg, "NN")]
    rest = topic_words(rng, sense, 3)
    return sprinkle(rng, head, [t for t in rest if t != word(arg, "NN")])


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "synthetic"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    sentences, labels = [], []
    for noun, senses in NOUNS.items():
        n_a = round(senses[0][1] * NOUN_SENTENCES)
        plan = [0] * n_a + [1] * (NOUN_SENTENCES - n_a)
        rng.shuffle(plan)
        for s in plan:
            labels.append((noun, len(sentences), senses[s][0]))
            sentences.append(noun_sentence(rng, noun, senses[s]))
        for sense in senses:
            for _ in range(MODIFIER_SENTENCES):
                sentences.append(modifier_sentence(rng, sense, relative=True))
                sentences.append(modifier_sentence(rng, sense, relative=False))
            for _ in range(BACKGROUND_SENTENCES):
                sentences.append(sprinkle(rng, [], topic_words(rng, sense, rng.randint(3, 5))))
    order = list(range(len(sentences)))
    rng.shuffle(order)
    position = {old: new for new, old in enumerate(order)}

    with open(out / "corpus.txt", "w") as f:
        for old in order:
            f.write(" ".join(sentences[old]) + "\n")
    with open(out / "planted.tsv", "w") as f:
        f.write("# key\tsense\tshare  (share lines)\n# key\tsentence\tsense  (label lines)\n")
        for noun, senses in NOUNS.items():
            n_a = round(senses[0][1] * NOUN_SENTENCES)
            f.write(f"share\t{noun}|N\t{senses[0][0]}\t{n_a / NOUN_SENTENCES}\n")
            f.write(f"share\t{noun}|N\t{senses[1][0]}\t{1 - n_a / NOUN_SENTENCES}\n")
        for noun, idx, label in sorted(labels, key=lambda x: (x[0], position[x[1]])):
            f.write(f"label\t{noun}|N\t{position[idx]}\t{label}\n")
    with open(out / "fixtures.txt", "w") as f:
        f.write("corpus corpus.txt\n")
        for noun, (a, b) in NOUNS.items():
            f.write(f"rel {noun} {a[5]} {b[5]}\n")
        for noun, (a, b) in NOUNS.items():
            f.write(f"adj {noun} {a[6]} {b[6]}\n")


if __name__ == "__main__":
    main()
