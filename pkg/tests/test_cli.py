import io
import json

import pytest

import main
from helpers import Report
from rlab.psets import classify
from rlab.sumset import density_row

def invoke(*argv):
	buffer = io.StringIO()
	code = main.run(list(argv), stdout=buffer)
	return code, buffer.getvalue()

def test_sieve_report():
	code, out = invoke("sieve", "--limit", "1e3", "--checkpoints", "10,100,1000")
	assert code == 0
	assert out == "x,count\n10,4\n100,25\n1000,168\n"

def test_sieve_dump(tmp_path):
	from rlab.sieve import load_bitmap

	path = tmp_path / "primes.bin"
	code, _ = invoke("sieve", "--limit", "1000", "--dump", str(path), "--segment-size", "128")
	assert code == 0
	assert load_bitmap(path).count_upto(1000) == 168

def test_classify_csv_and_json():
	code, out = invoke("classify", "--limit", "1000", "--set", "p2star", "--checkpoints", "100")
	assert code == 0
	header, row = out.splitlines()
	assert header == "x,count,normalized"
	assert row.startswith("100,45,")

	code, out = invoke("classify", "--limit", "1000", "--set", "p2", "--checkpoints", "100", "--json")
	assert code == 0
	(record,) = json.loads(out)
	assert record["x"] == 100 and record["count"] == 59

def test_output_file_matches_stdout(tmp_path):
	path = tmp_path / "density.csv"
	argv = ["density", "--limit", "1e4", "--checkpoints", "log10"]
	_, out = invoke(*argv)
	assert main.run(argv + ["--out", str(path)]) == 0
	assert path.read_text(encoding="utf-8") == out

def test_library_and_cli_agree():
	p2star = classify(10 ** 4).p2star
	expected = Report(
		[density_row(x, p2star).as_row() for x in (100, 1000, 10 ** 4)],
		["x", "sumset_count", "rep_sum", "rep_square_sum", "cs_bound", "density"]
	)
	code, out = invoke("density", "--limit", "1e4")
	assert code == 0
	assert out == expected.to_csv()

@pytest.mark.parametrize("argv", [
	["density", "--limit", "1e5"],
	["moments", "--limit", "1e5"],
	["pairs", "--limit", "1e5", "--N", "2:20:2"],
	["classify", "--limit", "1e5"],
])
def test_thread_count_does_not_change_output(argv):
	_, single = invoke(*argv, "--threads", "1")
	_, many = invoke(*argv, "--threads", "4")
	assert single == many and single

def test_moments():
	code, out = invoke("moments", "--limit", "100", "--checkpoints", "100")
	assert code == 0
	assert out.splitlines()[0] == "x,rep_sum,first_moment_product,diagonal,off_diagonal,rep_square_sum,factor2_form"

	code, out = invoke("moments", "--limit", "100", "--checkpoints", "100", "--windows")
	assert code == 0
	assert out.splitlines()[:2] == ["p1,p2,count,sigma", "2,2,44,"]

def test_romanov_and_mertens():
	code, out = invoke("romanov", "--limit", "1000", "--checkpoints", "1000")
	assert code == 0
	assert out.splitlines()[0] == "x,romanov_count,romanov_density,sumset_count,density"
	code, out = invoke("mertens", "--limit", "1e4")
	assert code == 0
	assert len(out.splitlines()) == 4

def test_pairs():
	code, out = invoke("pairs", "--limit", "30", "--N", "2,3")
	assert code == 0
	rows = out.splitlines()
	assert rows[1].startswith("30,2,4,3/2,")
	assert rows[2].endswith(",4/3,")

	code, out = invoke("pairs", "--limit", "1e4", "--N", "2:12:2", "--track")
	assert code == 0
	assert out.splitlines()[0] == "N,ratio,within_band"

def test_prime_pairs():
	code, out = invoke("primepairs", "--limit", "30", "--forms", "1,0,1,2")
	assert code == 0
	assert out.splitlines()[1].startswith("30,1,0,1,2,5,3/2,")

	code, _ = invoke("primepairs", "--limit", "30", "--forms", "1,0,2,1")
	assert code == 2
	code, out = invoke("primepairs", "--limit", "30", "--forms", "1,0,2,1", "--raw")
	assert code == 0
	assert out.splitlines()[1] == "30,1,0,2,1,6,,"

def test_order():
	code, out = invoke("order", "--d", "1,7,341")
	assert code == 0
	assert out == "d,order\n1,1\n7,3\n341,10\n"
	assert invoke("order", "--d", "4")[0] == 2

def test_wseries():
	code, out = invoke("wseries", "--K", "4", "--mode", "both", "--D", "20")
	assert code == 0
	K, w_dp, w_scan, D, _ = out.splitlines()[1].split(",")
	assert (K, w_dp, w_scan, D) == ("4", "1.74285714286", "1.74285714286", "20")

	code, out = invoke("wseries", "--K", "1:3")
	assert code == 0
	assert out.splitlines()[1] == "1,1,,,"

def test_wseries_rejects_bad_factor_table(tmp_path):
	path = tmp_path / "bad.txt"
	path.write_text("4: 3 7\n", encoding="utf-8")
	code, _ = invoke("wseries", "--K", "4", "--factor-table", str(path))
	assert code == 3

def test_series():
	code, out = invoke("series2", "--D", "3", "--Dp", "3")
	assert code == 0
	assert out == "Dd,Dp,partial_sum,delta\n3,3,1.62962962963,\n"
	code, out = invoke("series2", "--D", "8", "--doublings", "3")
	assert code == 0
	assert len(out.splitlines()) == 4

	code, out = invoke("innersum", "--k", "1,2", "--Dp", "10")
	assert code == 0
	assert out.splitlines()[1].split(",")[2] == "1.45929705215"

def test_conjecture(tmp_path):
	code, out = invoke("conjecture", "--limit", "100", "--checkpoints", "100", "--A", "naturals", "--B", "primes", "--c", "1")
	assert code == 0
	assert out.splitlines()[1].startswith("100,1.5,")
	assert out.splitlines()[1].endswith(",true")

	path = tmp_path / "a.txt"
	path.write_text("2\nthree\n", encoding="utf-8")
	assert invoke("conjecture", "--limit", "100", "--A", f"file:{path}")[0] == 2

def test_config_file(tmp_path):
	path = tmp_path / "run.yaml"
	path.write_text("limit: 1e3\ncheckpoints: '100'\nset: p2star\n", encoding="utf-8")
	code, out = invoke("classify", "--config", str(path))
	assert code == 0
	assert out.splitlines()[1].startswith("100,45,")

	# flags win over the file
	code, out = invoke("classify", "--config", str(path), "--set", "p2")
	assert out.splitlines()[1].startswith("100,59,")

@pytest.mark.parametrize("argv", [
	["bogus"],
	[],
	["classify"],
	["classify", "--limit", "1000", "--set", "evens"],
	["classify", "--limit", "1000", "--bogus"],
	["classify", "--limit", "1e12"],
	["sieve", "--limit", "1000", "--checkpoints", "5000"],
	["pairs", "--limit", "10", "--N", "10"],
	["classify", "--config", "/nonexistent/run.yaml"],
])
def test_usage_errors(argv):
	assert invoke(*argv)[0] == 2

def test_config_file_ranges(tmp_path):
	path = tmp_path / "run.yaml"
	path.write_text("limit: 1000\nN: 2:30\n", encoding="utf-8")
	code, out = invoke("pairs", "--config", str(path), "--checkpoints", "1000")
	assert code == 0
	rows = out.splitlines()[1:]
	assert [int(row.split(",")[1]) for row in rows] == list(range(2, 31))

def test_flags_are_not_abbreviated():
	assert invoke("classify", "--lim", "1000")[0] == 2
	assert invoke("classify", "--conf", "missing.yaml", "--limit", "1000")[0] == 2

def test_cogs_share_the_command_framework():
	import importlib

	from helpers import commands

	client = main.Client()
	assert all(isinstance(cog, commands.Cog) for cog in client.cogs.values())
	for name in ("tables", "density", "pairs", "series", "conjecture"):
		assert not hasattr(importlib.import_module(f"cogs.{name}"), "main")

def test_script_entry_point():
	import subprocess
	import sys
	from pathlib import Path

	root = Path(main.__file__).resolve().parent
	result = subprocess.run(
		[sys.executable, "main.py", "order", "--d", "7"], cwd=root, capture_output=True, text=True, timeout=120
	)
	assert result.returncode == 0
	assert result.stdout == "d,order\n7,3\n"
