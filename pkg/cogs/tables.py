import logging
from typing import TYPE_CHECKING

import helpers
from helpers.commands import Cog, RunConfig, argument, command
from rlab import psets, sieve

if TYPE_CHECKING:
	from main import Client

logger = logging.getLogger(__name__)

SETS = ("p2", "p2star", "primes")

class Tables(Cog):
	def __init__(self, client: "Client"):
		super().__init__(client)

	@command("sieve")
	@argument("--segment-size", type=helpers.convert_number, help="sieve segment by segment with this many integers")
	@argument("--dump", help="write the prime bitmap to this path")
	def sieve(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		table = sieve.sieve_primes(limit, segment_size=config.option("segment_size"), threads=config.threads)
		if config.option("dump"):
			sieve.dump_bitmap(table, config.option("dump"))
		rows = [{ "x": x, "count": sieve.count_upto(table, x) } for x in self.checkpoints(config, limit, minimum=2)]
		return helpers.Report(rows, ["x", "count"])

	@command("classify")
	@argument("--set", dest="set", choices=SETS, default="p2star")
	@argument("--dump", help="write the bitmap of the chosen set to this path")
	def classify(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		bitmap = self.client.tables.bitmap(config.option("set"), limit, config.threads)
		if config.option("dump"):
			sieve.dump_bitmap(bitmap, config.option("dump"))
		if config.option("set") == "p2":
			squares = psets.square_count(self.client.tables.primes(limit), limit)
			logger.info(f"{squares:,} prime squares up to {limit:,} lie in P2 and not in P2*")
		records = psets.checkpoint_report(bitmap, self.checkpoints(config, limit))
		return helpers.Report([r.as_row() for r in records], ["x", "count", "normalized"])

	@command("mertens")
	def mertens(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		primes = self.client.tables.primes(limit, config.threads)
		records = psets.mertens_report(primes, self.checkpoints(config, limit))
		return helpers.Report([r.as_row() for r in records], ["x", "reciprocal_sum", "loglog", "difference"])

def setup(client: "Client"):
	client.add_cog(Tables(client))
