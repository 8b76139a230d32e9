#!/usr/bin/env python3
"""Regenerates the bundled data files under crates/core/data/.

Inputs are the `wordfreq` frequency lists (Apache-2.0) and the AGID-derived
inflection tables shipped with `lemminflect`. The pattern inventories are
written from literal lists below. Run from the repository root:

    pip install wordfreq lemminflect
    python3 scripts/build_data.py
"""

import hashlib
import os
import re

import lemminflect
import wordfreq

DATA = os.path.join("crates", "core", "data")

APPEND_SIZE = 1193
REPLACE_SIZE = 3725
VERB_LEMMAS = 5000

PUNCT = [".", ",", "!", "?", ";", ":", "'", '"', "-", "(", ")", "...",
         "'s", "n't", "'m", "'re", "'ve", "'ll", "'d"]

PREPOSITIONS = ["", "of", "with", "at", "from", "into", "during", "including",
                "until", "against", "among", "throughout", "despite", "towards",
                "upon", "concerning", "to", "in", "for", "on", "by", "about",
                "like", "through", "over", "before", "between", "after", "since",
                "without", "under", "within", "along", "following", "across",
                "behind", "beyond", "plus", "except", "but", "up", "out",
                "around", "down", "off", "above", "near"]
DETERMINERS = ["the", "a", "an", "that", "this", ""]
VERB_TYPES = ["inf", "1sg", "2sg", "3sg", "pl", "part", "p", "1sgp", "2sgp",
              "3sgp", "ppl", "ppart"]
LETTER_PATTERNS = [("mb", "m"), ("bt", "t"), ("tch", "ch"), ("tm", "m"),
                   ("stle", "sle"), ("wh", "w"), ("hono", "ono"), ("hou", "ou"),
                   ("hones", "ones"), ("rh", "r"), ("kn", "n"), ("sw", "s"),
                   ("wr", "r"), ("who", "ho"), ("gn", "n"), ("gu", "g"),
                   ("ui", "i"), ("sc", "s"), ("al", "a"), ("pn", "n"),
                   ("ps", "s"), ("pb", "b"), ("dg", "g"), ("dn", "n"),
                   ("mn", "m"), ("isl", "il"), ("ough", "uf"),
                   ("through", "thro"), ("though", "tho"), ("ea", "ae"),
                   ("ei", "ie"), ("au", "ua"), ("exh", "ex"), ("tion", "sion"),
                   ("sion", "tion"), ("sure", "shure"), ("cture", "cshre"),
                   ("ere", "ear"), ("ear", "ere")]
VOWEL_COMBINATIONS = ["ea", "ou", "ei", "ie", "ai", "uo", "io", "oi", "au",
                      "ua", "ow", "wo"]
SIMILAR_SOUND = [("a", ["u"]), ("b", ["p"]), ("p", ["b"]), ("e", ["i", "a"]),
                 ("o", ["u", "w"]), ("f", ["v"]), ("w", ["o", "u"]),
                 ("u", ["a", "o", "w"]), ("i", ["e", "a", "y"]), ("v", ["f"]),
                 ("y", ["i"])]
POS_TYPES = ["NN", "NNS", "VB", "JJ", "JJR", "JJS", "RB"]

SUFFIX_REPLACE = ["AL_TO_E", "ATION_TO_ING", "CE_TO_T", "D_TO_S", "D_TO_T",
                  "ED_TO_ING", "ED_TO_S", "ER_TO_EST", "EST_TO_ER", "E_TO_AL",
                  "E_TO_ING", "ICAL_TO_Y", "IC_TO_Y", "IES_TO_Y", "ILY_TO_Y",
                  "ING_TO_ATION", "ING_TO_E", "ING_TO_ED", "ING_TO_ION",
                  "ING_TO_S", "ION_TO_ING", "N_TO_ING"]
SUFFIX_REPLACE_TAIL = ["S_TO_D", "S_TO_ED", "S_TO_ING", "S_TO_T", "T_TO_CE",
                       "T_TO_D", "T_TO_S", "Y_TO_IC", "Y_TO_ICAL", "Y_TO_IED",
                       "Y_TO_IES", "Y_TO_ILY"]
SUFFIX_APPEND = ["able", "age", "al", "ation", "d", "ed", "er", "es", "est",
                 "ful", "ing", "ist", "ive", "ly", "n", "ness", "ship", "wise",
                 "y"]
SUFFIX_REMOVE = ["able", "age", "al", "ation", "d", "ed", "er", "es", "est",
                 "ful", "ing", "ive", "less", "ly", "n", "ness", "y"]
VERB_FORMS = ["VB", "VBD", "VBG", "VBN", "VBZ"]
TRANSFORMS = ["AGREEMENT_PLURAL", "AGREEMENT_SINGULAR", "CASE_CAPITAL",
              "CASE_LOWER", "CASE_UPPER", "SPLIT_HYPHEN"]
VERB_PAIRS = [("VBD", "VB"), ("VBD", "VBG"), ("VBD", "VBN"), ("VBD", "VBZ"),
              ("VBG", "VB"), ("VBG", "VBD"), ("VBG", "VBN"), ("VBG", "VBZ"),
              ("VBN", "VB"), ("VBN", "VBD"), ("VBN", "VBG"), ("VBN", "VBZ"),
              ("VBZ", "VB"), ("VBZ", "VBD"), ("VBZ", "VBG"), ("VBZ", "VBN"),
              ("VB", "VBD"), ("VB", "VBG"), ("VB", "VBN"), ("VB", "VBZ")]

WORD = re.compile(r"^[a-z]+$")


def frequent_words(n):
    return [w for w in wordfreq.top_n_list("en", n) if WORD.match(w)]


def inventory(size, words):
    forced = PUNCT + ["I"] + [p for p in PREPOSITIONS if p] + [d for d in DETERMINERS if d]
    out = []
    seen = set()
    for w in forced + words:
        if w not in seen:
            seen.add(w)
            out.append(w)
        if len(out) == size:
            break
    return sorted(out)


def rule_plural(w):
    if len(w) > 1 and w.endswith("y") and w[-2] not in "aeiou":
        return w[:-1] + "ies"
    if w.endswith(("s", "x", "z", "ch", "sh")):
        return w + "es"
    return w + "s"


def rule_singular(w):
    if len(w) > 3 and w.endswith("ies"):
        return w[:-3] + "y"
    if w.endswith(("ses", "xes", "zes", "ches", "shes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith("ss"):
        return w[:-1]
    return None


def verbs(words):
    rows = []
    seen = set()
    for w in words:
        if w in seen:
            continue
        infl = lemminflect.getAllInflections(w, upos="VERB")
        if not infl or "VB" not in infl or infl["VB"][0] != w:
            continue
        if not all(k in infl for k in ("VBD", "VBG", "VBZ")):
            continue
        vbd = infl["VBD"][0]
        vbn = infl.get("VBN", infl["VBD"])[0]
        row = (w, vbd, infl["VBG"][0], vbn, infl["VBZ"][0])
        if not all(WORD.match(f) for f in row):
            continue
        rows.append(row)
        seen.add(w)
        if len(rows) == VERB_LEMMAS:
            break
    return rows


def plurals(words):
    rows = []
    seen = set()
    for w in words:
        if w in seen:
            continue
        infl = lemminflect.getAllInflections(w, upos="NOUN")
        if not infl or "NNS" not in infl or infl.get("NN", (None,))[0] != w:
            continue
        verb_lemmas = lemminflect.getAllLemmas(w, upos="VERB").get("VERB", ())
        if verb_lemmas and w not in verb_lemmas:
            continue
        pl = infl["NNS"][0]
        if pl == w or not WORD.match(pl):
            continue
        if rule_plural(w) != pl or rule_singular(pl) != w:
            rows.append((w, pl))
            seen.add(w)
    return rows


def write_lines(name, lines):
    with open(os.path.join(DATA, name), "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line + "\n")


def empty(x):
    return x if x else "<empty>"


def main():
    words = frequent_words(120000)

    tags = ["$KEEP", "$DELETE"]
    tags += ["$APPEND_" + t for t in inventory(APPEND_SIZE, words)]
    tags += ["$REPLACE_" + t for t in inventory(REPLACE_SIZE, words)]
    tags += ["$MERGE_HYPHEN", "$MERGE_SPACE", "$SUFFIXTRANSFORM_" + SUFFIX_REPLACE[0]]
    tags += ["$SUFFIXTRANSFORM_APPEND_" + s for s in SUFFIX_APPEND]
    tags += ["$SUFFIXTRANSFORM_" + s for s in SUFFIX_REPLACE[1:]]
    tags += ["$SUFFIXTRANSFORM_REMOVE_" + s for s in SUFFIX_REMOVE]
    tags += ["$SUFFIXTRANSFORM_" + s for s in SUFFIX_REPLACE_TAIL]
    tags += ["$TRANSFORM_" + t for t in TRANSFORMS]
    tags += ["$TRANSFORM_VERB_%s_%s" % p for p in VERB_PAIRS]
    tags += ["$UNKNOWN"]
    write_lines("tagset.txt", tags)

    write_lines("verbs.tsv", ["\t".join(r) for r in verbs(words)])
    write_lines("plurals.tsv", ["\t".join(r) for r in plurals(words[:30000])])
    write_lines("prepositions.txt", [empty(p) for p in PREPOSITIONS])
    write_lines("determiners.txt", [empty(d) for d in DETERMINERS])
    write_lines("verb_types.txt", VERB_TYPES)
    write_lines("letter_patterns.tsv", ["%s\t%s" % kv for kv in LETTER_PATTERNS])
    write_lines("vowel_combinations.txt", VOWEL_COMBINATIONS)
    write_lines("similar_sound.tsv",
                ["%s\t%s" % (k, v) for k, vs in SIMILAR_SOUND for v in vs])
    write_lines("pos_types.txt", POS_TYPES)

    files = ["determiners.txt", "letter_patterns.tsv", "plurals.tsv",
             "pos_types.txt", "prepositions.txt", "similar_sound.tsv",
             "tagset.txt", "verb_types.txt", "verbs.tsv",
             "vowel_combinations.txt"]
    manifest = []
    for name in files:
        with open(os.path.join(DATA, name), "rb") as f:
            manifest.append("%s  %s" % (hashlib.sha256(f.read()).hexdigest(), name))
    write_lines("MANIFEST", manifest)


if __name__ == "__main__":
    main()
