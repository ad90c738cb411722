import argparse
import importlib
import logging
import sys
import traceback
from pathlib import Path
from time import perf_counter
from typing import Any, Optional, Sequence

import yaml

import helpers
from helpers import custom_response
from helpers.commands import Cog, Command, RunConfig, RunConfigLoader, TableCache
from rlab import errors
from rlab.config import get_settings

logger = logging.getLogger("rlab")

LOG_FORMAT = "[{asctime}] [{levelname:<8}] {name}: {message}"
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3

def setup_logging(debug: bool = False) -> None:
	for handler in logging.root.handlers[:]:
		# prevent double logging
		logging.root.removeHandler(handler)
	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter(LOG_FORMAT, "%Y-%m-%d %H:%M:%S", style="{"))
	logging.root.addHandler(handler)
	logging.root.setLevel(logging.DEBUG if debug else logging.INFO)

class Client:
	"""Represents the command-line front end: loads the cogs, parses arguments and dispatches."""

	def __init__(self) -> None:
		self.custom_response = custom_response.CustomResponse()
		self.tables = TableCache()
		self.commands: dict[str, Command] = { }
		self.cogs: dict[str, Cog] = { }
		self.load_cogs()

	def add_cog(self, cog: Cog) -> None:
		self.cogs[type(cog).__name__] = cog
		for cmd in cog.get_commands():
			self.commands[cmd.name] = cmd

	def load_cogs(self) -> None:
		logger.debug("Loading cogs...")
		benchmark = perf_counter()

		# Load all cogs within the cogs folder
		allowed: list[str] = ["tables", "density", "pairs", "series", "conjecture"]
		cogs = sorted(Path(__file__).resolve().parent.joinpath("cogs").glob("*.py"))
		for cog in cogs:
			if cog.stem in allowed:  # if a command is missing, check this list
				importlib.import_module(f"cogs.{cog.stem}").setup(self)
				logger.debug(f"Loaded extension {cog.name}")
		end = perf_counter() - benchmark
		logger.debug(f"Loaded cogs in {end:.2f}s")

	def build_parser(self, defaults: Optional[dict[str, Any]] = None) -> argparse.ArgumentParser:
		common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
		common.add_argument("--limit", type=helpers.convert_number, help="upper end of the tables (scientific notation accepted)")
		common.add_argument("--checkpoints", default="log10", help="log10 or an explicit list x1,x2,...")
		common.add_argument("--out", help="write the report to this path instead of standard output")
		common.add_argument("--json", action="store_true", help="emit a JSON array of records instead of CSV")
		common.add_argument("--threads", type=helpers.convert_number, default=get_settings().threads)
		common.add_argument("--config", help="YAML file with default values for the flags")

		parser = argparse.ArgumentParser(prog="rlab", allow_abbrev=False, description="Sumsets 2^P + P2: tables, moments, pair counts, series.")
		subparsers = parser.add_subparsers(dest="command", required=True)
		for cmd in sorted(self.commands.values(), key=lambda c: c.name):
			sub = subparsers.add_parser(cmd.name, parents=[common], allow_abbrev=False, help=cmd.description, description=cmd.description)
			for flags, kwargs in cmd.arguments:
				sub.add_argument(*flags, **kwargs)
			if defaults:
				sub.set_defaults(**defaults)
		return parser

	@staticmethod
	def load_config_file(argv: Sequence[str]) -> dict[str, Any]:
		pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
		pre.add_argument("--config")
		known, _ = pre.parse_known_args(argv)
		if not known.config:
			return { }
		with open(known.config, encoding="utf-8") as f:
			data = yaml.load(f, Loader=RunConfigLoader) or { }
		if not isinstance(data, dict):
			raise ValueError(f"Expected a mapping in {known.config}, got {type(data).__name__}")
		logger.info(f"Loaded run configuration from {known.config}")
		# values keep their YAML types; numeric strings such as "1e6" go through the flag converter
		return {
			key.replace("-", "_"): helpers.convert_number(value) if isinstance(value, str) and helpers.NUMBER.match(value) else value
			for key, value in data.items()
		}

	def parse(self, argv: Sequence[str]) -> RunConfig:
		parser = self.build_parser(self.load_config_file(argv))
		return RunConfig.from_namespace(parser.parse_args(argv))

	def invoke(self, config: RunConfig) -> custom_response.Report:
		cmd = self.commands.get(config.command)
		if cmd is None:
			raise ValueError(self.custom_response("errors.unknown_command", command=config.command, commands=", ".join(self.commands)))
		logger.info(f"Running {config.command}...")
		benchmark = perf_counter()
		report = cmd.callback(config)
		end = perf_counter() - benchmark
		logger.info(f"{config.command} complete in {end:.2f}s ({len(report)} rows)")
		return report

	def handle_error(self, error: BaseException) -> int:
		match error:
			case errors.VerificationError():
				logger.error(self.custom_response(error.key, message=str(error)))
				return EXIT_VERIFICATION
			case errors.SetSpecParseError():
				logger.error(self.custom_response(error.key, message=str(error), line=error.line))
				return EXIT_USAGE
			case errors.RlabError():
				logger.error(self.custom_response(error.key, message=str(error)))
				return EXIT_USAGE
			case ValueError() | FileNotFoundError() | yaml.YAMLError():
				logger.error(self.custom_response("errors.usage", message=str(error)))
				return EXIT_USAGE
			case _:
				stack = "".join(traceback.format_exception(type(error), error, error.__traceback__))
				logger.error(self.custom_response("errors.unexpected", message=str(error)))
				logger.debug(stack)
				return EXIT_UNEXPECTED

def write_report(report: custom_response.Report, config: RunConfig, client: Client, stdout=None) -> None:
	text = report.render(config.as_json)
	if config.out:
		with open(config.out, "w", encoding="utf-8", newline="") as f:
			f.write(text)
		logger.info(client.custom_response("run.written", rows=len(report), path=config.out))
	else:
		(stdout or sys.stdout).write(text)

def run(argv: Optional[Sequence[str]] = None, *, stdout=None) -> int:
	"""Parses ``argv``, runs the command and writes its report.

	Returns
	-------
	`int`
		0 on success, 2 on a usage error, 3 on a failed verification, 1 on anything unexpected.
	"""
	argv = list(sys.argv[1:] if argv is None else argv)
	setup_logging(get_settings().debug)
	if logger.isEnabledFor(logging.DEBUG):
		logger.debug(f"Machine: {helpers.MachineInfo()}")
	client = Client()

	try:
		config = client.parse(argv)
	except SystemExit as e:
		# argparse already printed the usage text
		return EXIT_OK if e.code in (0, None) else EXIT_USAGE
	except Exception as e:
		return client.handle_error(e)

	try:
		report = client.invoke(config)
		write_report(report, config, client, stdout)
	except Exception as e:
		return client.handle_error(e)
	return EXIT_OK

def main() -> None:
	try:
		sys.exit(run())
	except KeyboardInterrupt:
		logger.error("KeyboardInterrupt: run stopped from the console")
		sys.exit(130)

if __name__ == "__main__":
	main()
