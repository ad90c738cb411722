import logging
from typing import TYPE_CHECKING

import helpers
from helpers.commands import Cog, RunConfig, argument, command
from rlab import errors, paircorr

if TYPE_CHECKING:
	from main import Client

logger = logging.getLogger(__name__)

def convert_forms(text: str) -> tuple[int, int, int, int]:
	"""
	Converts ``k1,l1,k2,l2`` into four integers. ex.: 1,0,1,2 = the twin prime forms n and n + 2
	"""
	parts = [part.strip() for part in text.split(",")]
	if len(parts) != 4:
		raise ValueError(f"'{text}' is not of the form k1,l1,k2,l2")
	return tuple(int(part) for part in parts)  # type: ignore[return-value]

class Pairs(Cog):
	def __init__(self, client: "Client"):
		super().__init__(client)

	@command("pairs")
	@argument("--N", dest="N", default="2:100:2", help="offsets as a:b[:step] or a list")
	@argument("--set", dest="set", choices=("p2", "p2star", "primes"), default="p2star")
	@argument("--track", action="store_true", help="report normalized(3N) / normalized(N) instead")
	def pairs(self, config: RunConfig) -> helpers.Report:
		x = self.require_limit(config)
		offsets = helpers.convert_range(str(config.option("N")))
		bitmap = self.client.tables.bitmap(config.option("set"), x, config.threads)
		reports = paircorr.pair_table(x, offsets, bitmap)
		if config.option("track"):
			tracks = paircorr.sigma_tracking(reports)
			outside = [t.N for t in tracks if not t.within_band]
			if outside:
				logger.warning(f"Normalized ratio leaves [0.5, 1.5] from N to 3N at N={outside}")
			return helpers.Report([t.as_row() for t in tracks], ["N", "ratio", "within_band"])
		return helpers.Report([r.as_row() for r in reports], ["x", "N", "count", "sigma", "normalized"])

	@command("primepairs")
	@argument("--forms", type=convert_forms, default=(1, 0, 1, 2), help="k1,l1,k2,l2 for the forms k1 n + l1, k2 n + l2")
	@argument("--raw", action="store_true", help="count without the parity hypothesis and leave the row unnormalized")
	def primepairs(self, config: RunConfig) -> helpers.Report:
		x = self.require_limit(config)
		k1, l1, k2, l2 = config.option("forms")
		if min(k1, l1, k2, l2) < 0:
			raise errors.ParameterError(f"coefficients must be nonnegative, got ({k1}, {l1}, {k2}, {l2})")
		primes = self.client.tables.primes(max(k1 * x + l1, k2 * x + l2, 2), config.threads)
		columns = ["x", "k1", "l1", "k2", "l2", "count", "sigma", "normalized"]
		if config.option("raw"):
			count = paircorr.count_linear_pairs(x, k1, l1, k2, l2, primes)
			return helpers.Report([{ "x": x, "k1": k1, "l1": l1, "k2": k2, "l2": l2, "count": count }], columns)
		report = paircorr.prime_pair_count(x, k1, l1, k2, l2, primes)
		return helpers.Report([report.as_row()], columns)

def setup(client: "Client"):
	client.add_cog(Pairs(client))
