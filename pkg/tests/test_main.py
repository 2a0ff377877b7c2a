"""Tests for the command-line interface."""

import argparse
import csv
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

import main
from generators import gen_circulant, gen_random_regular, gen_standard
from graphs import complement, load_graph, save_graph


def printed(mock_console) -> str:
    return "\n".join(str(call) for call in mock_console.print.call_args_list)


class TestCommandConfig:
    """Tests for CommandConfig.from_args()."""

    def test_from_parser(self):
        args = main.build_parser().parse_args(
            ["check", "internal", "g.el", "w.txt", "--one-indexed", "--jobs", "0"]
        )
        config = main.CommandConfig.from_args(args)
        assert config.command == "check internal"
        assert config.graph == Path("g.el")
        assert config.witness == Path("w.txt")
        assert config.offset == 1
        assert config.jobs == 1

    def test_defaults(self):
        args = main.build_parser().parse_args(["pipeline", "g.el"])
        config = main.CommandConfig.from_args(args)
        assert config.command == "pipeline"
        assert config.seed == 0
        assert config.output is None


class TestParseInts:
    """Tests for _parse_ints() function."""

    def test_commas(self):
        assert main._parse_ints("1,2,5") == [1, 2, 5]

    def test_bad(self):
        with pytest.raises(argparse.ArgumentTypeError):
            main._parse_ints("1,x")


class TestGen:
    """Tests for the gen subcommands."""

    def test_circulant(self, mock_console, tmp_path):
        out = tmp_path / "c.el"
        assert main.dispatch(["gen", "circulant", "--n", "10", "--gens", "1,2,5", "-o", str(out)]) == 0
        assert out.read_text() == save_graph(gen_circulant(10, [1, 2, 5]))

    def test_cayley(self, mock_console, tmp_path):
        out = tmp_path / "z.el"
        argv = ["gen", "cayley", "--factors", "2,6", "--set", "1:0,0:1,0:5,0:3,1:3", "-o", str(out)]
        assert main.dispatch(argv) == 0
        assert load_graph(out.read_text()).is_regular(5)

    def test_random_is_seeded(self, mock_console, tmp_path):
        first, second = tmp_path / "a.el", tmp_path / "b.el"
        for out in (first, second):
            main.dispatch(["gen", "random", "--n", "20", "--d", "5", "--seed", "4", "-o", str(out)])
        assert first.read_text() == second.read_text()

    def test_random_odd_degree_sum(self, mock_console):
        assert main.dispatch(["gen", "random", "--n", "21", "--d", "5"]) == main.EXIT_USAGE

    def test_hard_writes_partition(self, mock_console, tmp_path):
        out = tmp_path / "hard.el"
        assert main.dispatch(["gen", "hard", "--half", "8", "-o", str(out)]) == 0
        assert out.with_suffix(".part").read_text() == "0 1 2 3 4 5 6 7\n8 9 10 11 12 13 14 15\n"

    def test_hard_flags_internal_switching_end(self, mock_console, mocker, tmp_path):
        mocker.patch("main.local_switch", return_value=(mocker.MagicMock(), mocker.MagicMock()))
        warning = mocker.patch.object(main.log, "warning")
        out = tmp_path / "hard.el"
        assert main.dispatch(["gen", "hard", "--half", "8", "-o", str(out)]) == main.EXIT_NEGATIVE
        assert out.exists()
        warning.assert_called_once()
        assert "Not switching-hard" in printed(main.err_console)
        assert load_graph(out.read_text()).is_regular(5)

    def test_paley_to_stdout(self, mock_console):
        assert main.dispatch(["gen", "paley", "--q", "13"]) == 0
        assert mock_console.out.call_args.args[0].startswith("13 39\n")


class TestCheck:
    """Tests for the check subcommands."""

    def test_valid_partition_one_indexed(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(8, [1, 2, 4]))
        witness = tmp_path / "p.txt"
        witness.write_text("1 3 5 7\n2 4 6 8\n")
        assert main.dispatch(["check", "internal", str(g), str(witness), "--one-indexed"]) == 0
        assert "Valid internal partition" in printed(mock_console)

    def test_invalid_partition(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_standard("complete", 6))
        witness = tmp_path / "p.txt"
        witness.write_text("0 1 2\n*\n")
        assert main.dispatch(["check", "internal", str(g), str(witness)]) == main.EXIT_NEGATIVE

    def test_trivial_partition_is_usage_error(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_standard("complete", 4))
        witness = tmp_path / "p.txt"
        witness.write_text("0 1 2 3\n\n")
        assert main.dispatch(["check", "internal", str(g), str(witness)]) == main.EXIT_USAGE

    def test_cohesive_set(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(10, [1, 2, 5]))
        witness = tmp_path / "s.txt"
        witness.write_text("0 1 2 3 4 5\n")
        assert main.dispatch(["check", "cohesive", str(g), str(witness), "--k", "3"]) == 0
        assert main.dispatch(["check", "cohesive", str(g), str(witness), "--k", "4"]) == 1

    def test_missing_graph(self, mock_console, tmp_path):
        argv = ["check", "internal", str(tmp_path / "nope.el"), str(tmp_path / "w.txt")]
        assert main.dispatch(argv) == main.EXIT_USAGE

    def test_malformed_graph(self, mock_console, tmp_path):
        g = tmp_path / "bad.el"
        g.write_text("3 1\n1 1\n")
        witness = tmp_path / "w.txt"
        witness.write_text("0\n1 2\n")
        assert main.dispatch(["check", "internal", str(g), str(witness)]) == main.EXIT_USAGE


class TestSearch:
    """Tests for search internal."""

    def test_exhaustive_negative_then_check(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(10, [1, 2, 5]))
        cert = tmp_path / "g.cert"
        argv = ["search", "internal", str(g), "--method", "exhaustive", "-o", str(cert)]
        assert main.dispatch(argv) == main.EXIT_NEGATIVE
        assert cert.read_text().splitlines()[0] == "nonexistence"
        assert main.dispatch(["check", "internal", str(g), str(cert)]) == 0

    def test_hybrid_certificate_is_reproducible(self, mock_console, graph_file, tmp_path, petersen_graph):
        g = graph_file(petersen_graph)
        first, second = tmp_path / "1.cert", tmp_path / "2.cert"
        for out in (first, second):
            assert main.dispatch(["search", "internal", str(g), "--seed", "3", "-o", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert main.dispatch(["check", "internal", str(g), str(first)]) == 0

    def test_stale_certificate(self, mock_console, graph_file, tmp_path, petersen_graph):
        g = graph_file(petersen_graph)
        cert = tmp_path / "p.cert"
        main.dispatch(["search", "internal", str(g), "-o", str(cert)])
        other = graph_file(gen_random_regular(10, 3, 1), "other.el")
        assert main.dispatch(["check", "internal", str(other), str(cert)]) == main.EXIT_NEGATIVE

    def test_budget(self, mock_console, graph_file):
        g = graph_file(gen_circulant(10, [1, 2, 5]))
        argv = ["search", "internal", str(g), "--method", "exhaustive", "--node-cap", "2"]
        assert main.dispatch(argv) == main.EXIT_BUDGET

    def test_switch_trivial_end(self, mock_console, tmp_path):
        out = tmp_path / "hard.el"
        main.dispatch(["gen", "hard", "--half", "8", "-o", str(out)])
        argv = ["search", "internal", str(out), "--method", "switch", "--start", str(out.with_suffix(".part"))]
        assert main.dispatch(argv) == main.EXIT_BUDGET

    def test_switch_success(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(8, [1, 2, 4]))
        start = tmp_path / "start.txt"
        start.write_text("0 2 4 6\n*\n")
        argv = ["search", "internal", str(g), "--method", "switch", "--start", str(start)]
        assert main.dispatch(argv) == 0

    def test_help_names_trivial_end_exit_code(self, capsys):
        with pytest.raises(SystemExit):
            main.build_parser().parse_args(["search", "internal", "--help"])
        assert "exits with code 3 when it ends at a trivial partition" in " ".join(capsys.readouterr().out.split())

    def test_usage_error(self, mock_console):
        assert main.dispatch(["search"]) == main.EXIT_USAGE
        assert main.dispatch(["search", "internal", "g.el", "--method", "magic"]) == main.EXIT_USAGE


class TestCohesiveAndBisect:
    """Tests for cohesive and bisect."""

    def test_core(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(10, [1, 2, 5]))
        out = tmp_path / "core.txt"
        assert main.dispatch(["cohesive", str(g), "--k", "3", "-o", str(out)]) == 0
        assert out.read_text() == "0 1 2 3 4 5 6 7 8 9\n"

    def test_empty_core(self, mock_console, graph_file):
        g = graph_file(gen_circulant(8, [1]))
        assert main.dispatch(["cohesive", str(g), "--k", "3"]) == main.EXIT_NEGATIVE

    def test_ban_linial(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(10, [1, 2, 5]))
        out = tmp_path / "s.txt"
        assert main.dispatch(["cohesive", str(g), "--ban-linial", "-o", str(out)]) == 0
        assert len(out.read_text().split()) <= 6

    def test_bisect(self, mock_console, graph_file, tmp_path):
        g = graph_file(gen_circulant(16, [1]))
        out = tmp_path / "b.txt"
        assert main.dispatch(["bisect", str(g), "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert [len(line.split()) for line in lines] == [8, 8]
        assert "Bisection cut 2" in printed(mock_console)


class TestPipeline:
    """Tests for the pipeline command."""

    def test_writes_report(self, mock_console, graph_file, tmp_path, random_quintic):
        g = graph_file(random_quintic)
        out = tmp_path / "report"
        assert main.dispatch(["pipeline", str(g), "--seed", "1", "-o", str(out)]) == 0
        with (out / "pipeline.csv").open() as f:
            rows = list(csv.reader(f))
        assert tuple(rows[0]) == main.CSV_COLUMNS
        assert int(rows[1][6]) <= 11
        assert main.dispatch(["check", "cohesive", str(g), str(out / "pipeline.cert")]) == 0

    def test_too_small(self, mock_console, graph_file):
        g = graph_file(gen_standard("complete", 6))
        assert main.dispatch(["pipeline", str(g)]) == main.EXIT_USAGE


class TestCayleyCommands:
    """Tests for cyclic, near-complete, classify and scan."""

    def test_cyclic_exceptional(self, mock_console, tmp_path):
        out = tmp_path / "c.cert"
        assert main.dispatch(["cyclic", "--n", "10", "--gens", "1,2,5", "-o", str(out)]) == 1
        assert out.read_text().startswith("nonexistence\n")
        assert "C125_10" in printed(mock_console)

    def test_cyclic_partition(self, mock_console):
        assert main.dispatch(["cyclic", "--n", "16", "--gens", "1,4,8"]) == 0
        assert "gcd-classes" in printed(mock_console)

    def test_cyclic_bad_offsets(self, mock_console):
        assert main.dispatch(["cyclic", "--n", "10", "--gens", "1,2,3"]) == main.EXIT_USAGE

    def test_near_complete(self, mock_console, graph_file):
        assert main.dispatch(["near-complete", str(graph_file(complement(gen_circulant(8, [1]))))]) == 0
        two_triangles = graph_file(complement(gen_circulant(6, [2])), "k33.el")
        assert main.dispatch(["near-complete", str(two_triangles)]) == main.EXIT_NEGATIVE

    def test_power_of_two(self, mock_console):
        assert main.dispatch(["scan", "power-of-two", "--n", "16"]) == 0
        assert main.dispatch(["scan", "power-of-two", "--n", "12"]) == main.EXIT_NEGATIVE

    def test_paley_scan(self, mock_console, tmp_path):
        out = tmp_path / "paley"
        assert main.dispatch(["scan", "paley", "--max-q", "13", "-o", str(out)]) == 0
        with (out / "paley.csv").open() as f:
            rows = list(csv.DictReader(f))
        assert [row["q"] for row in rows] == ["5", "9", "13"]
        assert all(row["status"] == "verified" for row in rows)
        assert (out / "paley_0013.cert").exists()

    def test_paley_scan_incomplete(self, mock_console):
        assert main.dispatch(["scan", "paley", "--max-q", "13", "--node-cap", "1"]) == main.EXIT_BUDGET

    def test_classify(self, mock_console, tmp_path):
        out = tmp_path / "classify"
        assert main.dispatch(["classify", "abelian", "--max-order", "8", "-o", str(out)]) == 0
        with (out / "summary.csv").open() as f:
            rows = list(csv.DictReader(f))
        assert rows[0]["group"] == "Z6"
        assert rows[0]["verdict"] == "K6"
        assert all(row["verified"] == "yes" for row in rows)
        assert len(list(out.glob("*.cert"))) == len(rows)


class TestDispatch:
    """Tests for dispatch() error handling."""

    def test_keyboard_interrupt(self, mock_console, mocker):
        mocker.patch.dict(main.HANDLERS, {"scan": mocker.Mock(side_effect=KeyboardInterrupt)})
        assert main.dispatch(["scan", "power-of-two", "--n", "8"]) == main.EXIT_CANCELLED

    def test_verbose_logging(self, mock_console, mocker):
        configure = mocker.patch("main.configure_logging")
        main.dispatch(["scan", "power-of-two", "--n", "8", "-v"])
        configure.assert_called_once_with(True)

    def test_main_exits_with_status(self, mocker):
        mocker.patch("main.dispatch", return_value=3)
        mocker.patch.object(sys, "argv", ["internal-partitions", "scan", "power-of-two", "--n", "8"])
        with pytest.raises(SystemExit) as excinfo:
            main.main()
        assert excinfo.value.code == 3
