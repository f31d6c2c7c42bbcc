"""核心模块：日志、配置、异常与三个数值模块（opmat / process / stats）

使用延迟导入，避免在导入 mtc.core 包时加载所有依赖。
"""

from importlib import import_module

__all__ = [
    "ConfigManager",
    "LogManager",
    "HermitianSpectrum",
    "OperatorSubspace",
    "DensityMatrix",
    "KrausSet",
    "Instrument",
    "MarkovProcess",
    "OutcomeSequence",
    "JointDistribution",
]

_LAZY_IMPORTS = {
    "ConfigManager": "mtc.core.config_manager",
    "LogManager": "mtc.core.log_manager",
    "HermitianSpectrum": "mtc.core.opmat",
    "OperatorSubspace": "mtc.core.opmat",
    "DensityMatrix": "mtc.core.process",
    "KrausSet": "mtc.core.process",
    "Instrument": "mtc.core.process",
    "MarkovProcess": "mtc.core.process",
    "OutcomeSequence": "mtc.core.process",
    "JointDistribution": "mtc.core.stats",
}


def __getattr__(name):
    module_path = _LAZY_IMPORTS.get(name)
    if not module_path:
        raise AttributeError(f"module 'mtc.core' has no attribute '{name}'")
    module = import_module(module_path)
    value = getattr(module, name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(list(globals().keys()) + list(_LAZY_IMPORTS.keys()))
