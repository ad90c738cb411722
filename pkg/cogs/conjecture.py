from typing import TYPE_CHECKING

import helpers
from helpers.commands import Cog, RunConfig, argument, command
from rlab import explorer

if TYPE_CHECKING:
	from main import Client

class Conjecture(Cog):
	def __init__(self, client: "Client"):
		super().__init__(client)

	@command("conjecture")
	@argument("--A", dest="A", type=explorer.SetSpec.parse, default=explorer.SetSpec("primes"), help="exponent set")
	@argument("--B", dest="B", type=explorer.SetSpec.parse, default=explorer.SetSpec("p2"), help="summand set")
	@argument("--c", dest="c", type=float, help="flag checkpoints where the ratio exceeds c")
	def conjecture(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		rows = explorer.conjecture_report(config.option("A"), config.option("B"), self.checkpoints(config, limit), config.option("c"))
		return helpers.Report([row.as_row() for row in rows], ["x", "ratio", "density", "c_exceeded"])

def setup(client: "Client"):
	client.add_cog(Conjecture(client))
