"""Shared fixtures: a hand-built 30-entity mini knowledge graph and matching tables."""

from __future__ import annotations

import pytest

from rowlink.kg import KnowledgeGraphIndex, compute_entity_rank, ingest_ntriples

R = "http://kg/resource/"
O = "http://kg/ontology/"
P = "http://kg/prop/"
LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
OWL_THING = "http://www.w3.org/2002/07/owl#Thing"
DBO_AGENT = "http://dbpedia.org/ontology/Agent"


def _label(iri: str, text: str, lang: str = "") -> str:
    tag = f"@{lang}" if lang else ""
    return f'<{iri}> <{LABEL}> "{text}"{tag} .'


def _typed(iri: str, cls: str) -> str:
    return f"<{iri}> <{TYPE}> <{cls}> ."


def _link(s: str, p: str, o: str) -> str:
    return f"<{s}> <{p}> <{o}> ."


def _literal(s: str, p: str, value: str) -> str:
    return f'<{s}> <{p}> "{value}" .'


def build_mini_kg_lines() -> list[str]:
    lines = ["# mini knowledge graph fixture"]
    films = {
        "The_Island": ("The Island", "2005", ["Shia_LaBeouf"]),
        "Transformers": ("Transformers", "2007", ["Shia_LaBeouf"]),
        "The_Rock": ("The Rock", "1996", ["Sean_Connery"]),
        "Armageddon": ("Armageddon", "1998", []),
        "Pearl_Harbor": ("Pearl Harbor", "2001", ["Kate_Beckinsale"]),
    }
    for name, (label, year, cast) in films.items():
        iri = R + name
        lines.append(_label(iri, label, "en"))
        lines.append(_typed(iri, O + "Film"))
        lines.append(_link(iri, P + "director", R + "Michael_Bay"))
        lines.append(_literal(iri, P + "year", year))
        for actor in cast:
            lines.append(_link(iri, P + "starring", R + actor))

    people = {
        "Michael_Bay": ("Michael Bay", "1965", "United_States"),
        "Sean_Connery": ("Sean Connery", "1930", "Scotland"),
        "Shia_LaBeouf": ("Shia LaBeouf", "1986", "United_States"),
        "Kate_Beckinsale": ("Kate Beckinsale", "1973", None),
    }
    for name, (label, born, nationality) in people.items():
        iri = R + name
        lines.append(_label(iri, label, "en"))
        lines.append(_typed(iri, O + "Person"))
        lines.append(_literal(iri, P + "birthYear", born))
        if nationality:
            lines.append(_link(iri, P + "nationality", R + nationality))

    lines.append(_label(R + "The_Island_(band)", "The Island"))
    lines.append(_typed(R + "The_Island_(band)", O + "Band"))
    lines.append(_literal(R + "The_Island_(band)", P + "formed", "1999"))
    lines.append(_link(R + "The_Island_(band)", P + "origin", R + "Scotland"))
    lines.append(_label(R + "Island_Records", "Island Records"))
    lines.append(_typed(R + "Island_Records", O + "Band"))
    lines.append(_literal(R + "Island_Records", P + "founded", "1959"))
    lines.append(_label(R + "Mercury_Records", "Mercury Records"))
    lines.append(_typed(R + "Mercury_Records", O + "Organisation"))
    lines.append(_literal(R + "Mercury_Records", P + "founded", "1945"))
    lines.append(_label(R + "The_Island_(disambiguation)", "The Island"))

    planets = {
        "Mercury_(planet)": ("Mercury", "4879"),
        "Venus": ("Venus", "12104"),
        "Mars": ("Mars", "6779"),
        "Earth": ("Earth", "12742"),
        "Jupiter": ("Jupiter", "139820"),
    }
    for name, (label, diameter) in planets.items():
        iri = R + name
        lines.append(_label(iri, label, "en"))
        lines.append(_typed(iri, O + "Planet"))
        lines.append(_link(iri, P + "partOf", R + "Solar_System"))
        lines.append(_literal(iri, P + "diameter", diameter))
    lines.append(_label(R + "Solar_System", "Solar System"))

    elements = {
        "Mercury_(element)": ("Mercury", "hg", "80"),
        "Gold": ("Gold", "au", "79"),
        "Iron": ("Iron", "fe", "26"),
    }
    for name, (label, symbol, number) in elements.items():
        iri = R + name
        lines.append(_label(iri, label, "en"))
        lines.append(_typed(iri, O + "ChemicalElement"))
        lines.append(_literal(iri, P + "symbol", symbol))
        lines.append(_literal(iri, P + "atomicNumber", number))

    cities = {
        "Paris": ("Paris", "France", "2148000"),
        "Tokyo": ("Tokyo", "Japan", "13960000"),
        "Berlin": ("Berlin", "Germany", "3645000"),
    }
    for name, (label, country, population) in cities.items():
        iri = R + name
        lines.append(_label(iri, label, "en"))
        lines.append(_typed(iri, O + "City"))
        lines.append(_link(iri, P + "country", R + country))
        lines.append(_literal(iri, P + "population", population))

    countries = {
        "France": "France",
        "Japan": "Japan",
        "Germany": "Germany",
        "United_States": "United States",
        "Scotland": "Scotland",
    }
    for name, label in countries.items():
        lines.append(_label(R + name, label, "en"))
        lines.append(_typed(R + name, O + "Country"))

    hierarchy = [
        ("Film", "Work"),
        ("Person", None),
        ("Band", "Organisation"),
        ("Planet", "CelestialBody"),
        ("City", "Settlement"),
        ("Settlement", "PopulatedPlace"),
        ("Country", "PopulatedPlace"),
        ("ChemicalElement", None),
    ]
    for child, parent in hierarchy:
        if parent:
            lines.append(f"<{O}{child}> <{SUBCLASS}> <{O}{parent}> .")
    lines.append(f"<{O}Work> <{SUBCLASS}> <{OWL_THING}> .")
    lines.append(f"<{O}Person> <{SUBCLASS}> <{DBO_AGENT}> .")
    lines.append(f"<{O}Organisation> <{SUBCLASS}> <{DBO_AGENT}> .")
    lines.append(f"<{O}CelestialBody> <{SUBCLASS}> <{OWL_THING}> .")
    lines.append(f"<{O}PopulatedPlace> <{SUBCLASS}> <{OWL_THING}> .")
    lines.append(f"<{O}ChemicalElement> <{SUBCLASS}> <{OWL_THING}> .")
    return lines


FIXTURE_TABLES = {
    "films": [
        ["title", "year", "director"],
        ["the island", "2005", "bay michael"],
        ["transformers", "2007", "bay michael"],
        ["the rock", "1996", "bay michael"],
        ["armageddon", "1998", "bay michael"],
    ],
    "planets": [
        ["name", "orbit", "diameter km"],
        ["mercury", "solar system", "4879"],
        ["venus", "solar system", "12104"],
        ["mars", "solar system", "6779"],
    ],
    "elements": [
        ["element", "symbol", "number"],
        ["mercury", "hg", "80"],
        ["gold", "au", "79"],
        ["iron", "fe", "26"],
    ],
    "cities": [
        ["city", "country", "population"],
        ["paris", "france", "2148000"],
        ["tokyo", "japan", "13960000"],
        ["berlin", "germany", "3645000"],
    ],
    "people": [
        ["name", "born", "nationality"],
        ["michael bay", "1965", "united states"],
        ["sean connery", "1930", "scotland"],
        ["shia labeouf", "1986", "united states"],
    ],
}

EXPECTED_ANNOTATIONS = {
    ("films", 1): R + "The_Island",
    ("films", 2): R + "Transformers",
    ("films", 3): R + "The_Rock",
    ("films", 4): R + "Armageddon",
    ("planets", 1): R + "Mercury_(planet)",
    ("planets", 2): R + "Venus",
    ("planets", 3): R + "Mars",
    ("elements", 1): R + "Mercury_(element)",
    ("elements", 2): R + "Gold",
    ("elements", 3): R + "Iron",
    ("cities", 1): R + "Paris",
    ("cities", 2): R + "Tokyo",
    ("cities", 3): R + "Berlin",
    ("people", 1): R + "Michael_Bay",
    ("people", 2): R + "Sean_Connery",
    ("people", 3): R + "Shia_LaBeouf",
}


@pytest.fixture(scope="session")
def mini_dump(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("kg") / "mini.nt"
    path.write_text("\n".join(build_mini_kg_lines()) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def mini_index(mini_dump) -> KnowledgeGraphIndex:
    return compute_entity_rank(ingest_ntriples(mini_dump))


@pytest.fixture(scope="session")
def fixture_tables_dir(tmp_path_factory) -> str:
    directory = tmp_path_factory.mktemp("tables")
    for name, rows in FIXTURE_TABLES.items():
        lines = [",".join(f'"{v}"' for v in row) for row in rows]
        (directory / f"{name}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(directory)


@pytest.fixture(scope="session")
def gold_entities_csv(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("gold") / "entities.csv"
    lines = ["table_id,row_index,iri"]
    for (table_id, row), iri in sorted(EXPECTED_ANNOTATIONS.items()):
        lines.append(f"{table_id},{row},{iri}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def gold_core_csv(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("goldcore") / "core.csv"
    lines = ["table_id,core_column"]
    for name in sorted(FIXTURE_TABLES):
        lines.append(f"{name},0")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
