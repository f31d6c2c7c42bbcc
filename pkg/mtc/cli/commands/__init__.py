"""
CLI Commands
各子命令的注册函数
"""

from mtc.cli.commands.check import register_check_command
from mtc.cli.commands.probs import register_probs_command
from mtc.cli.commands.scenario import register_scenario_command
from mtc.cli.commands.validate import register_validate_command

__all__ = [
    "register_check_command",
    "register_probs_command",
    "register_scenario_command",
    "register_validate_command",
]
