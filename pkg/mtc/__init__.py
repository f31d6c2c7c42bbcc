"""Multi-time classicality toolkit
马尔可夫多时刻量子过程的统计模拟与经典性判据

使用延迟导入，避免在导入 mtc 包时加载 numpy/scipy 之外的全部子模块。
"""

from importlib import import_module

__version__ = '1.0.0'
__package_name__ = 'mtc'

__all__ = [
    "ConfigManager",
    "LogManager",
    "DensityMatrix",
    "KrausSet",
    "Instrument",
    "MarkovProcess",
    "OutcomeSequence",
    "validate_process",
    "joint_prob",
    "full_distribution",
    "analyze",
    "parse_process",
    "serialize_process",
    "run_scenario",
    "emit_report",
]

_LAZY_IMPORTS = {
    "ConfigManager": "mtc.core.config_manager",
    "LogManager": "mtc.core.log_manager",
    "DensityMatrix": "mtc.core.process",
    "KrausSet": "mtc.core.process",
    "Instrument": "mtc.core.process",
    "MarkovProcess": "mtc.core.process",
    "OutcomeSequence": "mtc.core.process",
    "validate_process": "mtc.core.process",
    "joint_prob": "mtc.core.stats",
    "full_distribution": "mtc.core.stats",
    "analyze": "mtc.checks.analyzer",
    "parse_process": "mtc.cli.process_file",
    "serialize_process": "mtc.cli.process_file",
    "run_scenario": "mtc.cli.scenarios",
    "emit_report": "mtc.cli.report",
}


def __getattr__(name):
    module_path = _LAZY_IMPORTS.get(name)
    if not module_path:
        raise AttributeError(f"module 'mtc' has no attribute '{name}'")
    module = import_module(module_path)
    value = getattr(module, name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(list(globals().keys()) + list(_LAZY_IMPORTS.keys()))
