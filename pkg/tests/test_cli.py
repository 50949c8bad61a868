import json

from twodescent import descent
from twodescent.cli import (
    CSV_HEADER,
    compute_record,
    main,
    record_from_json,
    record_to_json,
)
from twodescent.rankbound import DescentConfig


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRankCommand:
    def test_rank_zero_prime(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "--p", "7")
        assert code == 0
        assert "rank interval [0,0]" in out
        assert "confirmed: {1, -35}" in out

    def test_rank_json(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "--p", "3", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["interval"] == {"lower": 1, "upper": 1}
        assert payload["curve"] == {"a": "0", "b": "-15"}
        assert set(payload["images"]["alphaBar"]["confirmed"]) == {"1", "6", "10", "15"}

    def test_explicit_curve_flags(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "--a", "0", "--b", "-35")
        assert code == 0
        assert "rank interval [0,0]" in out

    def test_invalid_inputs_exit_2(self, capsys):
        assert run_cli(capsys, "rank", "--b", "0")[0] == 2
        assert run_cli(capsys, "rank", "--p", "15")[0] == 2
        assert run_cli(capsys, "rank", "--p", "2")[0] == 2
        assert run_cli(capsys, "rank")[0] == 2
        assert run_cli(capsys, "rank", "--p", "7", "--b", "-35")[0] == 2


class TestTableCommand:
    def test_table_1(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--id", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        for p, line in zip((7, 47, 23, 103), lines):
            assert line.startswith(f"p={p}")
            assert "interval=[0,0]" in line
            assert "CONSISTENT" in line

    def test_table_3_witness_column(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--id", "3")
        assert code == 0
        lines = out.strip().splitlines()
        for (p, n), line in zip(((11, 14), (131, 46), (19, 18), (379, 78)), lines):
            assert line.startswith(f"p={p}")
            assert f"N={n}" in line

    def test_table_csv(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--id", "1", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[1].startswith("7,0,-35,0,0,CONSISTENT")

    def test_unknown_table_exits_2(self, capsys):
        assert run_cli(capsys, "table", "--id", "5")[0] == 2


class TestScanCommand:
    def test_rank_zero_scan(self, capsys):
        code, out, _ = run_cli(capsys, "scan", "--family", "rank-zero", "--limit", "200")
        assert code == 0
        lines = out.strip().splitlines()
        primes = [int(l.split()[0].split("=")[1]) for l in lines[:-1]]
        assert primes == [7, 23, 47, 103, 127, 167]
        assert all("CONSISTENT" in l for l in lines[:-1])
        assert lines[-1] == "scan summary: 6 consistent, 0 inconsistent"

    def test_empty_scan(self, capsys):
        code, out, _ = run_cli(capsys, "scan", "--family", "rank-zero", "--limit", "1")
        assert code == 0
        assert out.strip() == "scan summary: 0 consistent, 0 inconsistent"

    def test_mod80_scan(self, capsys):
        code, out, _ = run_cli(
            capsys, "scan", "--mod80", "31", "--limit", "200", "--format", "json"
        )
        lines = out.strip().splitlines()
        records = [json.loads(l) for l in lines]
        assert [r["p"] for r in records[:-1]] == ["31", "191"]
        assert all(r["interval"]["lower"] >= 2 for r in records[:-1])

    def test_bad_selector_exits_2(self, capsys):
        assert run_cli(capsys, "scan", "--limit", "100")[0] == 2
        assert (
            run_cli(capsys, "scan", "--family", "rank-zero", "--mod40", "7", "--limit", "10")[0]
            == 2
        )

    def test_inconsistent_reports_force_nonzero_exit(self, capsys, monkeypatch):
        # force a false prediction to check the exit-code contract
        import twodescent.cli as cli_mod

        monkeypatch.setattr(cli_mod, "_status_for_prime", lambda p, rec: "INCONSISTENT")
        code, out, _ = run_cli(capsys, "scan", "--family", "rank-zero", "--limit", "30")
        assert code == 1
        assert "2 inconsistent" in out


class TestTwistCommand:
    def test_examples(self, capsys):
        code, out, _ = run_cli(capsys, "twist", "--p", "3", "--m", "-1")
        assert code == 0
        assert "rank interval [2,2] over Q(sqrt(-1))" in out
        code, out, _ = run_cli(capsys, "twist", "--p", "7", "--m", "-1")
        assert code == 0
        assert "rank interval [0,0] over Q(sqrt(-1))" in out

    def test_default_twist_is_minus_one(self, capsys):
        code, out, _ = run_cli(capsys, "twist", "--p", "7")
        assert "Q(sqrt(-1))" in out

    def test_non_squarefree_exits_2(self, capsys):
        assert run_cli(capsys, "twist", "--p", "7", "--m", "12")[0] == 2


class TestRecordSerialization:
    def test_roundtrip_over_all_table_primes(self):
        from twodescent.cli import TABLE_PRIMES

        for primes in TABLE_PRIMES.values():
            for p in primes:
                rec = compute_record(0, -5 * p, DescentConfig(), None)
                assert record_from_json(record_to_json(rec)) == rec

    def test_recomputation_is_bit_identical_modulo_timestamp(self):
        first = record_to_json(compute_record(0, -155, DescentConfig(), None))
        second = record_to_json(compute_record(0, -155, DescentConfig(), None))
        first.pop("timestampUtc")
        second.pop("timestampUtc")
        assert first == second

    def test_roundtrip_through_text(self):
        rec = compute_record(0, -15, DescentConfig(search_bound=64), None)
        text = json.dumps(record_to_json(rec))
        assert record_from_json(json.loads(text)) == rec

    def test_big_integers_serialized_as_strings(self):
        rec = compute_record(0, -5 * 5827, DescentConfig(), None)
        payload = record_to_json(rec)
        assert payload["curve"]["b"] == "-29135"
        assert all(isinstance(c, str) for c in payload["images"]["alpha"]["confirmed"])


class TestCache:
    def test_second_run_is_byte_identical_and_skips_search(self, capsys, tmp_path):
        cache = str(tmp_path / "cache.jsonl")
        code1, out1, _ = run_cli(capsys, "rank", "--p", "7", "--format", "json", "--cache", cache)
        before = descent.stats_snapshot()
        code2, out2, _ = run_cli(capsys, "rank", "--p", "7", "--format", "json", "--cache", cache)
        after = descent.stats_snapshot()
        assert (code1, code2) == (0, 0)
        assert out1 == out2
        assert before == after  # no new searches or scans ran

    def test_config_change_invalidates(self, capsys, tmp_path):
        cache = str(tmp_path / "cache.jsonl")
        run_cli(capsys, "rank", "--p", "7", "--cache", cache)
        before = descent.stats_snapshot()
        run_cli(capsys, "rank", "--p", "7", "--search-bound", "64", "--cache", cache)
        after = descent.stats_snapshot()
        assert after["local_scan"] > before["local_scan"]
        with open(cache) as fh:
            assert len(fh.readlines()) == 2

    def test_cache_is_append_only_jsonl(self, capsys, tmp_path):
        cache = str(tmp_path / "cache.jsonl")
        run_cli(capsys, "rank", "--p", "7", "--cache", cache)
        run_cli(capsys, "rank", "--p", "3", "--cache", cache)
        with open(cache) as fh:
            lines = [json.loads(l) for l in fh]
        assert [l["curve"]["b"] for l in lines] == ["-35", "-15"]

    def test_env_var_default(self, capsys, tmp_path, monkeypatch):
        cache = str(tmp_path / "env_cache.jsonl")
        monkeypatch.setenv("DESCENT_CACHE", cache)
        run_cli(capsys, "rank", "--p", "7")
        with open(cache) as fh:
            assert len(fh.readlines()) == 1
