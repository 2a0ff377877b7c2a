# internal-partitions test suite
