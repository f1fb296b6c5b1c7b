"""Deterministic synthetic registry/corpus generator for tests and demos.

Generates authors with realistic multicultural names, citation metadata with
per-author topic vocabulary, homonym blocks (authors sharing a full name),
byline variants from the observed taxonomy (reversed, misspelled, sticky,
incomplete), and a simulated external author-ID system with a tunable
over-splitting rate.  Everything is driven by a single seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .ingest import AuthorRecord, AuthorSlot, CitationRecord
from .linker import LinkedClaim
from .namekit import parse_name
from .util import derive_seed

GIVEN_NAMES = [
    "Anna", "Maria", "John", "Wei", "Carlos", "Fatima", "Elena", "Hiroshi", "Priya",
    "Lars", "Ingrid", "Pedro", "Sofia", "Ahmed", "Chen", "Olga", "Marco", "Amara",
    "David", "Lucia", "Jan", "Mei", "Rafael", "Aisha", "Erik", "Natalia", "Paulo",
    "Yuki", "Sanjay", "Greta", "Tomas", "Leila", "Felix", "Rosa", "Viktor", "Hana",
    "Samuel", "Clara", "Diego", "Nadia", "Henrik", "Ines", "Omar", "Vera", "Mateo",
    "Zofia", "Andre", "Lin", "Gustav", "Amira", "Pablo", "Eva", "Niels", "Dalia",
    "Igor", "Celia", "Bruno", "Anneke", "Ravi", "Marta", "Stefan", "Yasmin", "Jorge",
    "Katrin", "Tariq", "Paula", "Mikkel", "Selin", "Anton", "Flora", "Deniz", "Alma",
]

FAMILY_NAMES = [
    "Smith", "Zhang", "García", "Müller", "Nguyen", "Kowalski", "Silva", "Ivanov",
    "Johansson", "Rossi", "Tanaka", "Kim", "Novák", "Papadopoulos", "Hansen", "Costa",
    "Fernández", "Schneider", "Björk", "Dubois", "Moreau", "Petrov", "Sato", "Lindqvist",
    "Olsen", "Barbosa", "Keller", "Haug", "Vargas", "Lombardi", "Weber", "Søren",
    "Åström", "Núñez", "Świątek", "Horváth", "Dvořák", "Kovač", "Marek", "Leclerc",
    "van Dijk", "de Souza", "van der Berg", "di Stefano", "della Rosa", "dos Santos",
    "Okafor", "Mensah", "Haddad", "Rahman", "Chowdhury", "Banerjee", "Iyer", "Reddy",
    "Watanabe", "Yamamoto", "Park", "Choi", "Lehtinen", "Virtanen", "Nieminen", "Saar",
    "Ó Briain", "Mac Carthy", "Llewellyn", "Ferreira", "Cardoso", "Machado", "Duarte",
    "Höglund", "Łukasik", "Çelik", "Şahin", "Đorđević", "Kovačević", "Jovanović",
    "Castañeda", "Peña", "Muñoz", "Ortiz", "Quispe", "Huamán", "Cruz", "Ríos",
    "Bălan", "Ionescu", "Popescu", "Stãnescu", "Näslund", "Østergaard", "Thorvald",
    "Ciornei", "Freyman", "Leijs", "Hoeper", "Mandal", "Charas", "Morgado", "Oymak",
]

TOPIC_WORDS = {
    "genomics": ["genome", "sequencing", "variant", "allele", "transcriptome", "crispr",
                 "mutation", "phenotype", "chromatin", "methylation", "exome", "locus"],
    "optics": ["laser", "photonic", "waveguide", "refraction", "interference", "cavity",
               "diffraction", "polarization", "plasmon", "spectroscopy", "lens", "beam"],
    "fluids": ["turbulence", "vortex", "reynolds", "boundary", "convection", "shear",
               "viscosity", "wake", "droplet", "capillary", "jet", "swirl"],
    "materials": ["alloy", "crystal", "lattice", "graphene", "perovskite", "ceramic",
                  "composite", "fatigue", "corrosion", "nanotube", "coating", "grain"],
    "neuro": ["cortex", "synapse", "neuron", "plasticity", "hippocampus", "dopamine",
              "axon", "cognition", "oscillation", "connectome", "astrocyte", "memory"],
    "climate": ["monsoon", "aerosol", "albedo", "glacier", "drought", "carbon",
                "ocean", "circulation", "permafrost", "radiative", "elnino", "flux"],
    "robotics": ["manipulator", "kinematics", "actuator", "gripper", "locomotion",
                 "slam", "trajectory", "compliance", "teleoperation", "gait", "servo", "pose"],
    "econ": ["equilibrium", "auction", "elasticity", "incentive", "welfare", "taxation",
             "monopoly", "bargaining", "liquidity", "inflation", "tariff", "utility"],
    "epidemiology": ["cohort", "incidence", "prevalence", "exposure", "comorbidity",
                     "vaccination", "outbreak", "transmission", "seroprevalence", "risk",
                     "surveillance", "mortality"],
    "catalysis": ["catalyst", "zeolite", "adsorption", "selectivity", "oxidation",
                  "electrode", "electrolyte", "hydrogenation", "reactor", "kinetics",
                  "ligand", "yield"],
    "astro": ["supernova", "redshift", "quasar", "exoplanet", "accretion", "pulsar",
              "nebula", "photometry", "spectra", "halo", "magnetar", "transit"],
    "nlp": ["parsing", "embedding", "corpus", "tokenizer", "translation", "semantics",
            "discourse", "annotation", "lexicon", "syntax", "pragmatics", "grammar"],
}

COMMON_WORDS = [
    "analysis", "study", "model", "method", "evaluation", "approach", "effects",
    "dynamics", "framework", "measurement", "estimation", "properties", "review",
    "characterization", "observations", "experiments", "theory", "applications",
    "assessment", "comparison", "structure", "design", "prediction", "survey",
]

VENUES = [
    "Journal of Applied Research", "Annals of Science", "International Review Letters",
    "Proceedings of Natural Studies", "Advances in Methods", "Quarterly of Systems",
    "Transactions on Analysis", "European Research Notes", "Global Science Reports",
    "Archives of Measurement", "Studies in Theory", "Review of Experiments",
    "Journal of Quantitative Methods", "Frontiers of Modelling", "Applied Studies Letters",
    "Bulletin of Observations", "Communications in Research", "Journal of Field Data",
    "Methods and Protocols", "Reports on Progress", "Acta Analytica", "Nordic Journal of Science",
    "Pacific Research Quarterly", "Continental Review of Studies",
]

AFFILIATIONS = [
    "University of Harbourview", "Institute for Applied Studies", "Northgate University",
    "Central Technical University", "Riverside Research Institute", "Westfield College",
    "National Laboratory of Methods", "Highland University", "Metropolitan Institute",
    "Lakeside University", "Academy of Natural Sciences", "Polytechnic of the South",
    "Eastern State University", "Observatory Research Centre", "Coastal University",
    "Institute of Quantitative Research", "Mountain Plains University", "Delta Institute",
    "University of the Isles", "Foothills Research Campus",
]

VARIANT_KINDS = ("reversal", "misspelling", "sticky", "incomplete")


# ---------------------------------------------------------------------------
# byline variants

def reverse_name(full: str) -> str:
    tokens = full.split()
    return " ".join(reversed(tokens)) if len(tokens) > 1 else full


def misspell_name(full: str, rng: random.Random) -> str:
    """Replace one letter of the family name with the next letter down the alphabet."""
    parsed = parse_name(full)
    family = parsed.family
    letters = [i for i, ch in enumerate(family) if ch.isalpha()]
    i = rng.choice(letters)
    ch = family[i]
    repl = chr((ord(ch.lower()) - ord("a") + 1) % 26 + ord("a"))
    repl = repl.upper() if ch.isupper() else repl
    mutated = family[:i] + repl + family[i + 1 :]
    head = full[: len(full) - len(family)]
    return head + mutated


def sticky_name(full: str, other: str) -> str:
    return f"{full} and {other}"


def incomplete_name(full: str) -> str:
    """Initials of the given names plus the final family token."""
    parsed = parse_name(full)
    family_last = parsed.family.split()[-1]
    givens = parsed.given.split()
    if not givens:
        return family_last
    initials = ".".join(g[0].upper() for g in givens) + "."
    return f"{initials} {family_last}"


def apply_variant(full: str, kind: str, rng: random.Random, neighbor: str | None = None) -> str:
    if kind == "reversal":
        return reverse_name(full)
    if kind == "misspelling":
        return misspell_name(full, rng)
    if kind == "sticky":
        return sticky_name(full, neighbor or random_full_name(rng))
    if kind == "incomplete":
        return incomplete_name(full)
    raise ValueError(f"unknown variant kind {kind!r}")


def random_full_name(rng: random.Random) -> str:
    return f"{rng.choice(GIVEN_NAMES)} {rng.choice(FAMILY_NAMES)}"


# ---------------------------------------------------------------------------
# corpus generation

@dataclass
class SynthSpec:
    n_authors: int = 100
    seed: int = 7
    citations_per_author: tuple[int, int] = (2, 6)
    coauthors: tuple[int, int] = (1, 4)
    homonym_fraction: float = 0.10   # fraction of authors who share their CFN with a twin
    variant_rate: float = 0.15
    venue_policy: str = "author"     # "author": two house venues each; "shared": global pool
    year_policy: str = "career"      # "career": base year +/- 3; "uniform": whole range
    year_range: tuple[int, int] = (1980, 2020)
    missing_year_rate: float = 0.0
    affiliation_rate: float = 0.8
    title_topic_words: int = 4
    title_common_words: int = 2
    junk_authors: frozenset = frozenset()            # every citation degraded
    junk_last_citation_of: frozenset = frozenset()   # only the last citation degraded
    doi_prefix: str = "10.5555"


@dataclass
class SynthCorpus:
    authors: list[AuthorRecord]
    citations: list[CitationRecord]
    positions: dict[str, tuple[str, int]]  # paper_id -> (author_id, true position)
    spec: SynthSpec


def _assign_names(rng: random.Random, n_authors: int, homonym_fraction: float) -> list[str]:
    combos = [(g, f) for g in GIVEN_NAMES for f in FAMILY_NAMES]
    rng.shuffle(combos)
    n_pairs = int(n_authors * homonym_fraction / 2)
    names: list[str] = []
    for g, f in combos[: n_pairs]:
        names += [f"{g} {f}", f"{g} {f}"]
    for g, f in combos[n_pairs : n_pairs + (n_authors - len(names))]:
        names.append(f"{g} {f}")
    return names[:n_authors]


def generate(spec: SynthSpec) -> SynthCorpus:
    rng = random.Random(derive_seed(spec.seed, "synth"))
    cfns = _assign_names(rng, spec.n_authors, spec.homonym_fraction)
    topics = sorted(TOPIC_WORDS)

    authors: list[AuthorRecord] = []
    citations: list[CitationRecord] = []
    positions: dict[str, tuple[str, int]] = {}
    paper_no = 0

    for a_idx, cfn in enumerate(cfns):
        author_id = f"A{a_idx:05d}"
        arng = random.Random(derive_seed(spec.seed, "author", author_id))
        topic = topics[a_idx % len(topics)]
        venue_pool = (
            [arng.choice(VENUES), arng.choice(VENUES)]
            if spec.venue_policy == "author"
            else list(VENUES)
        )
        affiliation = arng.choice(AFFILIATIONS)
        base_year = arng.randint(spec.year_range[0] + 5, spec.year_range[1] - 5)
        n_cit = arng.randint(*spec.citations_per_author)
        all_junk = author_id in spec.junk_authors

        dois = []
        for c_idx in range(n_cit):
            paper_no += 1
            paper_id = f"P{paper_no:06d}"
            doi = f"{spec.doi_prefix}/{paper_id.lower()}"
            dois.append(doi)
            junk = all_junk or (
                author_id in spec.junk_last_citation_of and c_idx == n_cit - 1
            )

            if junk:
                title = " ".join(arng.sample(COMMON_WORDS, 2))
                abstract = ""
                venue = ""
                year = arng.randint(*spec.year_range)
                slot_affiliation = ""
            else:
                words = [arng.choice(TOPIC_WORDS[topic]) for _ in range(spec.title_topic_words)]
                words += [arng.choice(COMMON_WORDS) for _ in range(spec.title_common_words)]
                title = " ".join(words)
                abstract = " ".join(
                    arng.choice(TOPIC_WORDS[topic] + COMMON_WORDS) for _ in range(14)
                )
                venue = arng.choice(venue_pool)
                if spec.year_policy == "career":
                    year = min(spec.year_range[1], max(spec.year_range[0], base_year + arng.randint(-3, 3)))
                else:
                    year = arng.randint(*spec.year_range)
                slot_affiliation = affiliation if arng.random() < spec.affiliation_rate else ""
            if spec.missing_year_rate and arng.random() < spec.missing_year_rate:
                year = None

            n_co = arng.randint(*spec.coauthors)
            names = [random_full_name(arng) for _ in range(n_co)]
            position = arng.randint(1, n_co + 1)

            byline = cfn
            if arng.random() < spec.variant_rate:
                kind = arng.choice(VARIANT_KINDS)
                neighbor = names[0] if names else None
                byline = apply_variant(cfn, kind, arng, neighbor)

            slots = [AuthorSlot(name=nm, affiliation="") for nm in names]
            slots.insert(position - 1, AuthorSlot(name=byline, affiliation=slot_affiliation))
            citations.append(
                CitationRecord(
                    doi=doi,
                    paper_id=paper_id,
                    title=title,
                    abstract=abstract,
                    venue=venue,
                    year=year,
                    authors=tuple(slots),
                )
            )
            positions[paper_id] = (author_id, position)

        authors.append(AuthorRecord(author_id=author_id, cfn=cfn, claimed_dois=tuple(dois)))

    return SynthCorpus(authors=authors, citations=citations, positions=positions, spec=spec)


def simulate_external_ids(
    claims: Iterable[LinkedClaim],
    split_rate: float = 0.3,
    merge_pairs: int = 0,
    seed: int = 0,
) -> dict[tuple[str, int], str]:
    """Emulate an imperfect external author-ID system over linked claims.

    With probability ``split_rate`` an author's citations are divided between
    two external ids (the over-splitting failure), and ``merge_pairs``
    consecutive author pairs are fused under one id (the over-merging failure).
    """
    by_author: dict[str, list[LinkedClaim]] = {}
    for claim in claims:
        by_author.setdefault(claim.author_id, []).append(claim)

    out: dict[tuple[str, int], str] = {}
    merged_from: dict[str, str] = {}
    ordered = sorted(by_author)
    for i in range(0, 2 * merge_pairs, 2):
        if i + 1 < len(ordered):
            merged_from[ordered[i + 1]] = ordered[i]

    for author_id in ordered:
        rng = random.Random(derive_seed(seed, "extid", author_id))
        items = sorted(by_author[author_id], key=lambda c: c.paper_id)
        base = merged_from.get(author_id, author_id)
        split = len(items) > 1 and rng.random() < split_rate
        cut = len(items) // 2 if split else len(items)
        for k, claim in enumerate(items):
            ext = f"X:{base}" if k < cut else f"X:{author_id}:b"
            out[(claim.paper_id, claim.position)] = ext
    return out


# ---------------------------------------------------------------------------
# position-identification evaluation protocol

@dataclass(frozen=True)
class PositionInstance:
    cfn: str
    author_names: tuple[str, ...]
    true_position: int
    kind: str  # "exact" or a variant kind


def position_protocol_instances(
    n: int,
    seed: int = 0,
    variant_share: float = 0.5,
    coauthors: tuple[int, int] = (0, 5),
) -> list[PositionInstance]:
    """Sampled (CFN, byline list, true position) instances with injected variants."""
    rng = random.Random(derive_seed(seed, "position-protocol"))
    out = []
    for _ in range(n):
        cfn = random_full_name(rng)
        n_co = rng.randint(*coauthors)
        names = [random_full_name(rng) for _ in range(n_co)]
        position = rng.randint(1, n_co + 1)
        if rng.random() < variant_share:
            kind = rng.choice(VARIANT_KINDS)
            neighbor = names[0] if names else None
            byline = apply_variant(cfn, kind, rng, neighbor)
        else:
            kind = "exact"
            byline = cfn
        names.insert(position - 1, byline)
        out.append(
            PositionInstance(cfn=cfn, author_names=tuple(names), true_position=position, kind=kind)
        )
    return out
