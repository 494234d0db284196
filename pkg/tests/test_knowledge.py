import pytest

from room_memory.core import EntityName
from room_memory.knowledge import (
    KnowledgeError,
    commonsense_location,
    load_kb,
    parse_kb,
    pretrain_semantic,
)


def write(tmp_path, text):
    path = tmp_path / "kb.tsv"
    path.write_text(text, encoding="utf-8")
    return path


def test_bundled_kb_shape(kb):
    assert len(kb) == 10
    assert len(kb.name_roster) == 10
    assert len(set(kb.locations)) == 10


def test_load_fact_lines(tmp_path):
    kb = load_kb(write(tmp_path, "# comment\nlaptop\tdesk\ncat\tlap\n@name\tJames\n"))
    assert ("laptop", "desk") in kb.facts
    assert ("cat", "lap") in kb.facts
    assert kb.name_roster == ("James",)


@pytest.mark.parametrize(
    "text",
    [
        "laptop\tdesk\nlaptop\tgarage\n",
        "laptop\tdesk\ncup\tdesk\n",
        "laptop\tdesk\ndesk\tgarage\n",
        "# nothing\n",
        "laptop desk\n",
    ],
)
def test_load_rejects(tmp_path, text):
    with pytest.raises(KnowledgeError):
        load_kb(write(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_kb(tmp_path / "nope.tsv")


def test_commonsense_location(kb):
    assert commonsense_location(kb, "laptop") == "desk"
    assert commonsense_location(kb, "cat") == "lap"
    with pytest.raises(KnowledgeError):
        commonsense_location(kb, "unicorn")


def test_commonsense_is_bijection(kb):
    images = [commonsense_location(kb, o) for o in kb.objects]
    assert len(set(images)) == len(kb.objects)


@pytest.mark.parametrize("capacity, expected", [(10, 10), (3, 3), (100, 10), (1, 1)])
def test_pretrain_semantic(kb, capacity, expected):
    facts = pretrain_semantic(kb, capacity)
    assert len(facts) == expected
    assert all(q.is_semantic and q.meta == 1 for q in facts)
    assert [(q.head.base, q.tail.base) for q in facts] == list(kb.facts[:expected])


def test_pretrain_semantic_laptop_first(kb):
    first = pretrain_semantic(kb, 1)[0]
    assert first.head == EntityName("laptop") and first.tail == EntityName("desk")


def test_subset_keeps_prefix(kb):
    sub = kb.subset(4)
    assert sub.facts == kb.facts[:4]
    with pytest.raises(KnowledgeError):
        kb.subset(11)


def test_parse_rejects_bad_name():
    with pytest.raises(ValueError):
        parse_kb("laptop\tdesk\n@name\tMary Ann\n")
