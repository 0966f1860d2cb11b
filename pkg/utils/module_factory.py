"""
Module Factory
Builds HeckeModule instances with guardrails and caching
"""
import functools

from config.config import Config, JobConfig
from hecke.extweyl import check_index_set
from hecke.heckemod import HeckeModule
from hecke.rootdata import build_root_datum
from utils.logger import log


class ModuleFactory:
    """Factory class to create and share HeckeModule instances"""

    @staticmethod
    def create_module(cartan_type: str, m: int, denominator: int) -> HeckeModule:
        """
        Create (or reuse) the module M_m for a Cartan type and denominator

        Args:
            cartan_type: Cartan type string such as "A2" or "A1xA1"
            m: twisting parameter
            denominator: N, the torsion order of the points used

        Returns:
            HeckeModule: module with generator tables built
        """
        try:
            return ModuleFactory._cached(cartan_type, m, denominator)
        except Exception as e:
            log.error(f"Failed to build module for {cartan_type}, m={m}, N={denominator}: {e}")
            raise

    @staticmethod
    @functools.lru_cache(maxsize=32)
    def _cached(cartan_type: str, m: int, denominator: int) -> HeckeModule:
        log.info(f"Initializing module M_{m} for {cartan_type}, N={denominator}")
        datum = build_root_datum(cartan_type)
        check_index_set(datum, denominator)
        module = HeckeModule(datum, m, denominator)
        log.info(f"Module ready: {len(module)} basis elements")
        log.debug(f"Limits: {Config.get_all_config()}")
        return module

    @staticmethod
    def from_job(job: JobConfig) -> HeckeModule:
        """Module described by a job configuration"""
        return ModuleFactory.create_module(job.cartan_type, job.m, job.denominator)

    @staticmethod
    def clear_cache():
        """Forget every module built so far"""
        ModuleFactory._cached.cache_clear()
        log.info("Module cache cleared")
