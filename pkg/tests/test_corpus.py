import pytest
from hypothesis import given
from hypothesis import strategies as st

from photoaesthetics.corpus import (CATEGORIES, PhotoRecord, load_manifest, popularity_bucket,
                                    save_manifest, split_train_test)
from photoaesthetics.errors import InsufficientData, ParseError, ValidationError

HEADER = "photo_id,path,category,favorites,score,judgments\n"


def write(tmp_path, body, header=HEADER):
    path = tmp_path / "m.csv"
    path.write_text(header + body, encoding="utf-8")
    return path


class TestManifest:
    def test_judgments_give_mean(self, tmp_path):
        (rec,) = load_manifest(write(tmp_path, "a1,img/a1.jpg,urban,3,,4|4|5|3|4\n"))
        assert rec.mean_score == 4.0
        assert rec.judgments == (4, 4, 5, 3, 4)
        assert rec.bucket == "tail"

    def test_bad_category_names_row(self, tmp_path):
        with pytest.raises(ValidationError, match="row 3"):
            load_manifest(write(tmp_path, "a,a.jpg,urban,1,,\nb,b.jpg,cars,1,,\n"))

    @pytest.mark.parametrize("row", [
        "a,a.jpg,urban,2,,4|6\n",
        "a,a.jpg,urban,-1,,\n",
        "a,a.jpg,urban,x,,\n",
        "a,a.jpg,urban,2,4.5,4|4\n",
        "a,a.jpg,urban,2,7,\n",
        "a,a.jpg,urban,1,,\na,b.jpg,urban,1,,\n",
    ])
    def test_invalid_rows(self, tmp_path, row):
        with pytest.raises(ValidationError):
            load_manifest(write(tmp_path, row))

    def test_matching_score_and_judgments(self, tmp_path):
        (rec,) = load_manifest(write(tmp_path, "a,a.jpg,people,50,4.2,4|4|5|4|4\n"))
        assert rec.mean_score == pytest.approx(4.2)

    def test_score_only_and_unlabeled(self, tmp_path):
        recs = load_manifest(write(tmp_path, "a,a.jpg,people,50,3.5,\nb,b.jpg,nature,0,,\n"))
        assert recs[0].mean_score == 3.5 and recs[0].judgments == ()
        assert recs[1].mean_score is None

    def test_quoted_fields(self, tmp_path):
        (rec,) = load_manifest(write(tmp_path, '"x,1","dir, with comma/x.png",animals,7,,\n'))
        assert rec.photo_id == "x,1" and rec.path == "dir, with comma/x.png"

    @pytest.mark.parametrize("header, body", [
        ("id,path\n", ""),
        (HEADER, "a,a.jpg,urban\n"),
    ])
    def test_parse_errors(self, tmp_path, header, body):
        with pytest.raises(ParseError):
            load_manifest(write(tmp_path, body, header))

    def test_roundtrip(self, tmp_path):
        recs = [
            PhotoRecord("p1", "a/p1.jpg", "nature", 0, (1, 2, 2), 5 / 3),
            PhotoRecord("p2", "p2.png", "urban", 46, (), 3.25),
            PhotoRecord("p,3", "p3.png", "people", 6, (), None),
        ]
        path = tmp_path / "out.csv"
        save_manifest(path, recs)
        assert load_manifest(path) == recs


class TestBuckets:
    @pytest.mark.parametrize("f, bucket", [(0, "tail"), (5, "tail"), (6, "torso"),
                                           (45, "torso"), (46, "head"), (10**9, "head")])
    def test_boundaries(self, f, bucket):
        assert popularity_bucket(f) == bucket

    @given(st.integers(0, 10**12))
    def test_total_partition(self, f):
        b = popularity_bucket(f)
        assert (b == "tail") == (f <= 5)
        assert (b == "torso") == (5 < f <= 45)
        assert (b == "head") == (f > 45)


def make_corpus(n_tail=1000, n_torso=1000, n_head=500, category="urban"):
    recs = []
    for i in range(n_tail):
        recs.append(PhotoRecord(f"t{i:04d}", "", category, i % 6, (), 3.0))
    for i in range(n_torso):
        recs.append(PhotoRecord(f"m{i:04d}", "", category, 6 + i % 40, (), 3.0))
    for i in range(n_head):
        recs.append(PhotoRecord(f"h{i:04d}", "", category, 46 + i, (), 3.0))
    return recs


class TestSplit:
    def test_reference_protocol_sizes(self):
        recs = make_corpus()
        train, test = split_train_test(recs, "urban", 800, seed=42)
        assert len(test) == 800 and len(train) == 1700
        assert all(r.bucket == "tail" for r in test)
        assert not {r.photo_id for r in train} & {r.photo_id for r in test}
        assert {r.bucket for r in train} == {"tail", "torso", "head"}

    def test_reproducible_and_order_independent(self):
        recs = make_corpus(100, 50, 10)
        a = split_train_test(recs, "urban", 30, seed=7)
        b = split_train_test(list(reversed(recs)), "urban", 30, seed=7)
        assert [r.photo_id for r in a[1]] == [r.photo_id for r in b[1]]
        assert a == split_train_test(recs, "urban", 30, seed=7)
        assert a[1] != split_train_test(recs, "urban", 30, seed=8)[1]

    def test_other_categories_ignored(self):
        recs = make_corpus(50, 0, 0) + make_corpus(50, 10, 0, category="people")
        train, test = split_train_test(recs, "people", 20)
        assert all(r.category == "people" for r in train + test)
        assert len(train) == 40

    def test_not_enough_tail(self):
        with pytest.raises(InsufficientData):
            split_train_test(make_corpus(), "urban", 1001)

    def test_all_tail_needs_training_rows(self):
        with pytest.raises(InsufficientData):
            split_train_test(make_corpus(10, 0, 0), "urban", 10)


def test_categories_match_table():
    assert set(CATEGORIES) == {"people", "nature", "animals", "urban"}
