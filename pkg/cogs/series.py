import logging
import math
from typing import TYPE_CHECKING

import helpers
from helpers.commands import Cog, RunConfig, argument, command
from rlab import arith, errors

if TYPE_CHECKING:
	from main import Client

logger = logging.getLogger(__name__)

class Series(Cog):
	"""Orders of 2, the order-weighted series W(K), the inner sum over d' and the double series."""

	def __init__(self, client: "Client"):
		super().__init__(client)

	@command("order")
	@argument("--d", dest="d", default="1:99:2", help="odd moduli as a:b[:step] or a list")
	def order(self, config: RunConfig) -> helpers.Report:
		rows = [{ "d": d, "order": arith.mult_order2(d) } for d in helpers.convert_range(str(config.option("d")))]
		return helpers.Report(rows, ["d", "order"])

	@command("wseries")
	@argument("--K", dest="K", default="1:20", help="values of K as a:b[:step] or a list")
	@argument("--mode", choices=("dp", "scan", "both"), default="dp")
	@argument("--D", dest="D", type=helpers.convert_number, default=10 ** 4, help="modulus bound for the scan")
	@argument("--factor-table", help="verified factorizations of 2^k - 1, one 'k: p1 p2 ...' per line")
	def wseries(self, config: RunConfig) -> helpers.Report:
		Ks = sorted(set(helpers.convert_range(str(config.option("K")))))
		mode, D = config.option("mode"), config.option("D")
		table = arith.load_factor_table(config.option("factor_table")) if config.option("factor_table") else None
		rows = []
		for K in Ks:
			dp = float(arith.w_dp(K, factor_table=table).value) if mode in ("dp", "both") else None
			scan = float(arith.w_scan(K, D).value) if mode in ("scan", "both") else None
			if dp is not None and scan is not None and scan > dp:
				raise errors.VerificationError(
					self.client.custom_response("run.verification_failed", what="W scan <= W dp", where=f"K={K}"), k=K
				)
			reference = dp if dp is not None else scan
			rows.append({
				"K": K, "W_dp": dp, "W_scan": scan, "D": D if scan is not None else None,
				"ratio_to_logK": reference / math.log(K) if K > 1 else None
			})
		return helpers.Report(rows, ["K", "W_dp", "W_scan", "D", "ratio_to_logK"])

	@command("innersum")
	@argument("--k", dest="k", default="1:12", help="values of k as a:b[:step] or a list")
	@argument("--Dp", dest="Dp", type=helpers.convert_number, default=10 ** 4)
	def innersum(self, config: RunConfig) -> helpers.Report:
		Dp = config.option("Dp")
		rows = []
		for k in helpers.convert_range(str(config.option("k"))):
			closed = arith.inner_sum_closed(k)
			truncated = arith.inner_sum_trunc(k, Dp)
			rows.append({
				"k": k, "closed": closed, "truncated": float(truncated), "gap": closed - float(truncated),
				"error_bound": truncated.error_bound, "k_times_closed": k * closed
			})
		return helpers.Report(rows, ["k", "closed", "truncated", "gap", "error_bound", "k_times_closed"])

	@command("series2")
	@argument("--D", dest="D", type=helpers.convert_number, default=64, help="bound Dd on the odd d")
	@argument("--Dp", dest="Dp", type=helpers.convert_number, help="bound on d' (default: the same as --D)")
	@argument("--doublings", type=helpers.convert_number, default=1, help="repeat with Dd = Dp doubled this many times")
	def series2(self, config: RunConfig) -> helpers.Report:
		D, steps = config.option("D"), config.option("doublings")
		columns = ["Dd", "Dp", "partial_sum", "delta"]
		if steps > 1:
			return helpers.Report([row.as_row() for row in arith.series_doubling(D, steps)], columns)
		Dp = config.option("Dp", D)
		estimate = arith.double_series_partial(D, Dp)
		return helpers.Report([{ "Dd": D, "Dp": Dp, "partial_sum": float(estimate) }], columns)

def setup(client: "Client"):
	client.add_cog(Series(client))
