#!/usr/bin/env python3
"""Independent Porter stemmer used to build tests/data/porter_pairs.tsv.

Written directly from the 1980 algorithm description, using a
condition-string formulation (m computed from the C/V form) rather than
index juggling, so it shares no structure with the library code. Includes
the reference implementation's documented departures: step 2 maps bli->ble
(not abli->able), the extra logi->log rule, and words of length <= 2 are
left alone.

Usage:
  porter_oracle.py WORD...        stem arguments
  porter_oracle.py --fixture OUT  write the bundled word/stem fixture
"""

import sys

VOWELS = set("aeiou")


def is_cons(word, i):
    c = word[i]
    if c in VOWELS:
        return False
    if c == "y":
        return True if i == 0 else not is_cons(word, i - 1)
    return True


def cv_form(word):
    return "".join("C" if is_cons(word, i) else "V" for i in range(len(word)))


def measure(stem):
    # m = number of VC blocks in [C](VC)^m[V]
    form = cv_form(stem)
    collapsed = []
    for ch in form:
        if not collapsed or collapsed[-1] != ch:
            collapsed.append(ch)
    return "".join(collapsed).count("VC")


def has_vowel(stem):
    return "V" in cv_form(stem)


def ends_double_cons(word):
    return len(word) >= 2 and word[-1] == word[-2] and is_cons(word, len(word) - 1)


def ends_cvc(word):
    if len(word) < 3:
        return False
    i = len(word) - 1
    if not (is_cons(word, i) and not is_cons(word, i - 1) and is_cons(word, i - 2)):
        return False
    return word[-1] not in "wxy"


def step1a(word):
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-3] + "i"
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if measure(stem) > 0 else word
    fired = False
    if word.endswith("ed") and has_vowel(word[:-2]):
        word, fired = word[:-2], True
    elif word.endswith("ing") and has_vowel(word[:-3]):
        word, fired = word[:-3], True
    if not fired:
        return word
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if ends_double_cons(word) and word[-1] not in "lsz":
        return word[:-1]
    if measure(word) == 1 and ends_cvc(word):
        return word + "e"
    return word


def step1c(word):
    if word.endswith("y") and has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


STEP2 = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("bli", "ble"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ("logi", "log"),
]

STEP3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

STEP4 = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def longest_match(word, suffixes):
    best = None
    for s in suffixes:
        if word.endswith(s) and (best is None or len(s) > len(best)):
            best = s
    return best


def step2(word):
    suf = longest_match(word, [s for s, _ in STEP2])
    if suf is None:
        return word
    repl = dict(STEP2)[suf]
    stem = word[: len(word) - len(suf)]
    return stem + repl if measure(stem) > 0 else word


def step3(word):
    suf = longest_match(word, [s for s, _ in STEP3])
    if suf is None:
        return word
    repl = dict(STEP3)[suf]
    stem = word[: len(word) - len(suf)]
    return stem + repl if measure(stem) > 0 else word


def step4(word):
    suf = longest_match(word, STEP4)
    if suf is None:
        return word
    stem = word[: len(word) - len(suf)]
    if suf == "ion" and not (stem and stem[-1] in "st"):
        return word
    return stem if measure(stem) > 1 else word


def step5a(word):
    if not word.endswith("e"):
        return word
    stem = word[:-1]
    m = measure(stem)
    if m > 1 or (m == 1 and not ends_cvc(stem)):
        return stem
    return word


def step5b(word):
    if word.endswith("ll") and measure(word[:-1]) > 1:
        return word[:-1]
    return word


def stem(word):
    if len(word) <= 2:
        return word
    for f in (step1a, step1b, step1c, step2, step3, step4, step5a, step5b):
        word = f(word)
    return word


# Words assembled from the algorithm's published examples plus common
# English vocabulary exercising every rule family.
ANCHORS = {
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress",
    "cats": "cat", "feed": "feed", "agreed": "agre", "plastered": "plaster",
    "bled": "bled", "motoring": "motor", "sing": "sing", "conflated": "conflat",
    "troubled": "troubl", "sized": "size", "hopping": "hop", "tanned": "tan",
    "falling": "fall", "hissing": "hiss", "fizzed": "fizz", "failing": "fail",
    "filing": "file", "happy": "happi", "sky": "sky", "relational": "relat",
    "conditional": "condit", "rational": "ration", "valenci": "valenc",
    "hesitanci": "hesit", "digitizer": "digit", "conformabli": "conform",
    "radicalli": "radic", "differentli": "differ", "vileli": "vile",
    "analogousli": "analog", "vietnamization": "vietnam", "predication": "predic",
    "operator": "oper", "feudalism": "feudal", "decisiveness": "decis",
    "hopefulness": "hope", "callousness": "callous", "formaliti": "formal",
    "sensitiviti": "sensit", "sensibiliti": "sensibl", "triplicate": "triplic",
    "formative": "form", "formalize": "formal", "electriciti": "electr",
    "electrical": "electr", "hopeful": "hope", "goodness": "good",
    "revival": "reviv", "allowance": "allow", "inference": "infer",
    "airliner": "airlin", "gyroscopic": "gyroscop", "adjustable": "adjust",
    "defensible": "defens", "irritant": "irrit", "replacement": "replac",
    "adjustment": "adjust", "dependent": "depend", "adoption": "adopt",
    "homologou": "homolog", "communism": "commun", "activate": "activ",
    "angulariti": "angular", "homologous": "homolog", "effective": "effect",
    "bowdlerize": "bowdler", "probate": "probat", "rate": "rate",
    "cease": "ceas", "controll": "control", "roll": "roll",
    "accident": "accid",
}


def fixture_words():
    """~1000 real English words: regular verb inflections plus common
    derivational vocabulary, anchored by the published rule examples."""
    verbs = [
        "accept", "act", "adapt", "adjust", "admit", "adopt", "advise",
        "alarm", "allow", "amaze", "announce", "answer", "appear", "approve",
        "argue", "arrange", "arrest", "arrive", "ask", "assist", "attach",
        "attack", "attend", "avoid", "bake", "balance", "ban", "bang",
        "bat", "bathe", "beg", "behave", "belong", "blame", "bless",
        "block", "boil", "bolt", "bomb", "book", "bore", "borrow", "bounce",
        "box", "brake", "branch", "breathe", "bruise", "brush", "bump",
        "burn", "bury", "buzz", "call", "camp", "care", "carry", "carve",
        "cause", "challenge", "change", "charge", "chase", "cheat", "check",
        "cheer", "chew", "choke", "chop", "claim", "clap", "clean", "clear",
        "climb", "clip", "close", "coach", "coil", "collect", "collide",
        "comb", "command", "communicate", "compare", "compete", "complain",
        "complete", "concentrate", "concern", "confess", "confirm",
        "connect", "consider", "consist", "contain", "continue", "copy",
        "correct", "cough", "count", "cover", "crack", "crash", "crawl",
        "cross", "crush", "cry", "cure", "curl", "curve", "cycle", "damage",
        "dance", "dare", "deceive", "decide", "declare", "decorate",
        "delay", "delight", "deliver", "depend", "describe", "deserve",
        "destroy", "detect", "develop", "disagree", "disappear", "disarm",
        "discover", "dislike", "divide", "double", "doubt", "drag",
        "drain", "dream", "dress", "drop", "drown", "drum", "dry", "dust",
        "earn", "educate", "embarrass", "employ", "empty", "encourage",
        "end", "enjoy", "enter", "entertain", "escape", "examine", "excite",
        "excuse", "exercise", "exist", "expand", "expect", "explain",
        "explode", "extend", "fade", "fail", "fasten", "fax", "fear",
        "fence", "fetch", "file", "fill", "film", "fit", "fix", "flap",
        "flash", "float", "flood", "flow", "fold", "follow", "fool",
        "force", "form", "frame", "frighten", "fry", "gather", "gaze",
        "glow", "glue", "grab", "grease", "greet", "grin", "grip", "groan",
        "guarantee", "guard", "guess", "guide", "hammer", "hand", "handle",
        "hang", "happen", "harm", "hate", "haunt", "head", "heal", "heap",
        "heat", "help", "hook", "hop", "hope", "hover", "hug", "hunt",
        "hurry", "identify", "ignore", "imagine", "impress", "improve",
        "include", "increase", "influence", "inform", "inject", "injure",
        "instruct", "intend", "interest", "interrupt", "introduce",
        "invent", "invite", "irritate", "itch", "jail", "jam", "jog",
        "join", "joke", "judge", "juggle", "jump", "kick", "kill", "kiss",
        "knit", "knock", "knot", "label", "land", "last", "laugh",
        "launch", "learn", "level", "license", "lick", "lighten", "list",
        "listen", "live", "load", "lock", "look", "love", "manage",
        "march", "mark", "marry", "match", "matter", "measure", "melt",
        "mend", "mess", "milk", "mine", "miss", "mix", "moan", "moor",
        "mourn", "move", "mug", "multiply", "murder", "nail", "name",
        "need", "nest", "nod", "note", "notice", "number", "obey",
        "object", "observe", "obtain", "offend", "offer", "open", "order",
        "overflow", "owe", "own", "pack", "paddle", "paint", "park",
        "part", "pass", "paste", "pat", "pause", "peck", "pedal", "peel",
        "peep", "perform", "permit", "phone", "pick", "pinch", "pine",
        "place", "plan", "plant", "play", "please", "plug", "point",
        "poke", "polish", "pop", "possess", "post", "pour", "pray",
        "preach", "prefer", "prepare", "present", "preserve", "press",
        "pretend", "prevent", "prick", "print", "produce", "program",
        "promise", "protect", "provide", "pull", "pump", "punch",
        "puncture", "punish", "push", "question", "queue", "race", "rain",
        "raise", "reach", "receive", "record", "reduce", "reflect",
        "refuse", "regret", "reign", "reject", "rejoice", "relax",
        "release", "rely", "remain", "remember", "remind", "remove",
        "repair", "repeat", "report", "request", "rescue", "retire",
        "return", "rhyme", "rinse", "risk", "rob", "rock", "rot", "rub",
        "ruin", "rule", "rush", "sack", "sail", "satisfy", "save", "saw",
        "scare", "scatter", "scold", "scorch", "scrape", "scratch",
        "scream", "screw", "scribble", "scrub", "seal", "search",
        "separate", "serve", "settle", "shade", "share", "shave",
        "shelter", "shiver", "shock", "shop", "shrug", "sigh", "sign",
        "signal", "sip", "ski", "skip", "slap", "slip", "slow", "smash",
        "smell", "smile", "smoke", "snatch", "sneeze", "sniff", "snore",
        "snow", "soak", "soothe", "sound", "spare", "spark", "sparkle",
        "spell", "spill", "spoil", "spot", "spray", "sprout", "squash",
        "squeak", "squeal", "squeeze", "stain", "stamp", "stare", "start",
        "stay", "steer", "step", "stir", "stitch", "stop", "store",
        "strap", "strengthen", "stretch", "strip", "stroke", "stuff",
        "subtract", "succeed", "suck", "suffer", "suggest", "suit",
        "supply", "support", "suppose", "surprise", "surround", "suspect",
        "suspend", "switch", "talk", "tame", "tap", "taste", "tease",
        "telephone", "tempt", "terrify", "test", "thank", "thaw", "tick",
        "tickle", "tie", "time", "tip", "tire", "touch", "tour", "tow",
        "trace", "trade", "train", "transport", "trap", "travel", "treat",
        "tremble", "trick", "trip", "trot", "trouble", "trust", "try",
        "tug", "tumble", "turn", "twist", "type", "undress", "unfasten",
        "unite", "unlock", "unpack", "use", "vanish", "visit", "wail",
        "wait", "walk", "wander", "want", "warm", "warn", "wash", "waste",
        "watch", "water", "wave", "weigh", "welcome", "whip", "whirl",
        "whisper", "whistle", "wink", "wipe", "wish", "wobble", "wonder",
        "work", "worry", "wrap", "wreck", "wrestle", "wriggle",
    ]
    doubling = {
        "admit", "ban", "bat", "beg", "bomb", "chop", "clap", "clip",
        "drag", "drop", "drum", "fit", "flap", "grab", "grin", "grip",
        "hop", "hug", "jam", "jog", "knit", "knot", "mug", "nod", "pat",
        "permit", "plan", "plug", "pop", "prefer", "regret", "rob", "rot",
        "rub", "shop", "shrug", "sip", "skip", "slap", "slip", "snow",
        "spot", "stamp", "step", "stir", "stop", "strap", "strip", "tap",
        "tip", "trap", "trip", "trot", "tug", "wrap",
    }
    # "snow"/"stamp" never double; keep the set to true doublers
    doubling -= {"snow", "stamp"}
    sibilant = ("s", "x", "z", "ch", "sh")

    def inflect(v):
        forms = [v]
        if v.endswith("e"):
            forms += [v + "d", v[:-1] + "ing", v + "s"]
        elif v.endswith("y") and len(v) > 1 and v[-2] not in "aeiou":
            forms += [v[:-1] + "ied", v + "ing", v[:-1] + "ies"]
        elif v in doubling:
            forms += [v + v[-1] + "ed", v + v[-1] + "ing", v + "s"]
        else:
            forms += [v + "ed", v + "ing", v + ("es" if v.endswith(sibilant) else "s")]
        return forms

    derived = [
        "ability", "absolutely", "achievement", "active", "activity",
        "agreement", "amusement", "announcement", "appointment",
        "argument", "arrangement", "assessment", "assignment", "athletic",
        "attachment", "attractive", "authority", "awareness", "basic",
        "beautiful", "biological", "capacity", "careful", "celebration",
        "cheerful", "chemical", "classic", "colorful", "combination",
        "commitment", "community", "concentration", "consciousness",
        "consideration", "conversation", "cooperation", "creative",
        "critical", "curiosity", "curious", "dangerous", "darkness",
        "decoration", "defensive", "delicious", "demonstration",
        "department", "destination", "development", "economic",
        "education", "effectiveness", "electricity", "electronic",
        "engagement", "enormous", "environment", "equipment",
        "establishment", "examination", "excitement", "exclusive",
        "expensive", "explanation", "faithful", "famous", "fantastic",
        "fitness", "forgiveness", "generation", "generous", "government",
        "grateful", "happiness", "harmful", "helpful", "historic",
        "humanity", "identical", "identity", "illness", "imagination",
        "improvement", "information", "investment", "invitation",
        "involvement", "jealous", "judgment", "kindness", "location",
        "logical", "madness", "magic", "magical", "majority",
        "management", "massive", "measurement", "medical", "movement",
        "music", "musical", "mysterious", "nation", "native", "negative",
        "nervous", "numerous", "obvious", "operation", "opportunity",
        "organization", "payment", "peaceful", "personality", "physical",
        "political", "population", "positive", "possibility", "powerful",
        "practical", "preparation", "presentation", "previous",
        "priority", "pronunciation", "public", "punishment", "quality",
        "quantity", "reality", "relation", "relative", "reputation",
        "requirement", "retirement", "sadness", "security", "sensitive",
        "serious", "settlement", "situation", "society", "specific",
        "statement", "station", "successful", "technical", "thankful",
        "traffic", "transportation", "treatment", "typical", "university",
        "usefulness", "various", "weakness", "willingness", "wonderful",
    ]

    words = set(ANCHORS)
    for v in verbs:
        words.update(inflect(v))
    words.update(derived)
    pool = sorted(words)
    if len(pool) <= 1000:
        return pool
    # keep every anchor, thin the rest evenly so coverage spans a..z
    rest = [w for w in pool if w not in ANCHORS]
    need = 1000 - len(ANCHORS)
    picked = {rest[(i * len(rest)) // need] for i in range(need)}
    while len(picked) < need:  # index collisions
        picked.add(next(w for w in rest if w not in picked))
    return sorted(picked | set(ANCHORS))


def main():
    args = sys.argv[1:]
    if args and args[0] == "--fixture":
        bad = {w: (stem(w), want) for w, want in ANCHORS.items() if stem(w) != want}
        if bad:
            for w, (got, want) in sorted(bad.items()):
                print(f"ANCHOR MISMATCH {w}: got {got}, want {want}", file=sys.stderr)
            sys.exit(1)
        words = fixture_words()
        with open(args[1], "w") as f:
            for w in words:
                f.write(f"{w}\t{stem(w)}\n")
        print(f"wrote {len(words)} pairs to {args[1]} (anchors verified)")
        return
    for w in args:
        print(f"{w}\t{stem(w)}")


if __name__ == "__main__":
    main()
