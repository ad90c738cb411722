import logging
from typing import TYPE_CHECKING

import helpers
from helpers.commands import Cog, RunConfig, argument, command
from rlab import errors, sumset

if TYPE_CHECKING:
	from main import Client

logger = logging.getLogger(__name__)

class Density(Cog):
	"""Moments of the representation function of 2^P + P2* and the lower bound they give for the sumset."""

	def __init__(self, client: "Client"):
		super().__init__(client)

	@command("density")
	@argument("--set", dest="set", choices=("p2", "p2star", "primes"), default="p2star")
	def density(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		bitmap = self.client.tables.bitmap(config.option("set"), limit, config.threads)
		rows = []
		for x in self.checkpoints(config, limit):
			row = sumset.density_row(x, bitmap, threads=config.threads)
			if row.rep_sum and not row.certified:
				raise errors.VerificationError(
					self.client.custom_response("run.verification_failed", what="Cauchy-Schwarz", where=f"x={x}")
				)
			rows.append(row.as_row())
		return helpers.Report(rows, ["x", "sumset_count", "rep_sum", "rep_square_sum", "cs_bound", "density"])

	@command("moments")
	@argument("--windows", action="store_true", help="list every exponent pair at the largest checkpoint instead")
	def moments(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		p2star = self.client.tables.bitmap("p2star", limit, config.threads)
		xs = self.checkpoints(config, limit)
		if config.option("windows"):
			profile = sumset.moment_profile(xs[-1], p2star, threads=config.threads)
			weights = dict(((w.p1, w.p2), s) for w, s in sumset.off_diagonal_weights(profile))
			rows = [
				{ "p1": w.p1, "p2": w.p2, "count": w.count, "sigma": weights.get((w.p1, w.p2)) } for w in profile.windows
			]
			return helpers.Report(rows, ["p1", "p2", "count", "sigma"])

		rows = [sumset.moment_row(x, p2star, threads=config.threads).as_row() for x in xs]
		return helpers.Report(
			rows, ["x", "rep_sum", "first_moment_product", "diagonal", "off_diagonal", "rep_square_sum", "factor2_form"]
		)

	@command("romanov")
	def romanov(self, config: RunConfig) -> helpers.Report:
		limit = self.require_limit(config)
		primes = self.client.tables.primes(limit, config.threads)
		p2star = self.client.tables.bitmap("p2star", limit, config.threads)
		rows = []
		for x in self.checkpoints(config, limit):
			classical = sumset.romanov_count(x, primes)
			ours = sumset.sumset_count(x, p2star)
			rows.append({
				"x": x, "romanov_count": classical, "romanov_density": classical / x, "sumset_count": ours, "density": ours / x
			})
		return helpers.Report(rows, ["x", "romanov_count", "romanov_density", "sumset_count", "density"])

def setup(client: "Client"):
	client.add_cog(Density(client))
