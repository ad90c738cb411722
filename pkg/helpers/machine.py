"""Descriptions of the machine a run happens on, for the run log and for memory sizing."""

from cpuinfo import get_cpu_info
import psutil

class CPU:
	@property
	def name(self):
		return get_cpu_info().get("brand_raw", "unknown CPU")

	@property
	def threads(self):
		return psutil.cpu_count() or 1

	def __str__(self):
		return f"{self.name} ({self.threads} threads)"

	cores = count = threads

class RAM:
	def __init__(self):
		self._memory = psutil.virtual_memory()

	@property
	def total(self):
		return round(self._memory.total / 1073741824, 2)

	@property
	def available(self):
		return round(self._memory.available / 1073741824, 2)

	@property
	def usage(self):
		return f"{self.available} GB free of {self.total} GB"

	def __str__(self):
		return self.usage

class MachineInfo:
	@property
	def processor(self):
		return CPU()

	cpu = processor

	@property
	def memory(self):
		return RAM()

	ram = memory

	def __str__(self):
		return f"{self.cpu}, {self.ram}"
