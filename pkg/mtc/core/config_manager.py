# @time:    2026-03-02

import os
from pathlib import Path

import yaml
from pydantic import ValidationError

from mtc.core.log_manager import log
from mtc.models import AnalysisConfig

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "assets" / "default_config.yaml"


class ConfigManager:
	"""
	分析配置管理类：默认配置 -> MTC_CONFIG 用户配置 -> MTC_TOLERANCE 环境变量
	"""
	_config = None  # 类变量，用于存储加载的配置

	@classmethod
	def load_config(cls) -> AnalysisConfig:
		if cls._config is not None:
			return cls._config  # 如果已加载，则直接返回

		analysis = dict(cls._read_yaml(DEFAULT_CONFIG_PATH).get("analysis") or {})

		user_path = os.getenv("MTC_CONFIG")
		if user_path:
			user_config = cls._read_yaml(Path(user_path).expanduser())
			analysis.update(user_config.get("analysis") or {})
			log.info(f"已合并用户配置: {user_path}")

		tolerance = os.getenv("MTC_TOLERANCE")
		if tolerance:
			try:
				analysis["tolerance"] = float(tolerance)
			except ValueError:
				log.error(f"MTC_TOLERANCE 不是合法的浮点数: {tolerance}")
				raise ValueError(f"MTC_TOLERANCE 不是合法的浮点数: {tolerance}")

		try:
			cls._config = AnalysisConfig(**analysis)
		except ValidationError as e:
			log.error(f"分析配置校验失败: {e}")
			raise ValueError(f"分析配置校验失败: {e}")
		log.debug(f"读取分析配置成功: {cls._config}")
		return cls._config

	@classmethod
	def reset(cls):
		"""清除缓存，下次 load_config 重新读取（测试中修改环境变量后使用）"""
		cls._config = None

	@staticmethod
	def _read_yaml(config_path):
		try:
			with open(config_path, 'r', encoding='utf-8') as file:
				config = yaml.safe_load(file)
		except FileNotFoundError:
			log.error(f"未找到配置文件: {config_path}")
			raise FileNotFoundError(f"未找到配置文件: {config_path}")
		except yaml.YAMLError as e:
			log.error(f"YAML 配置文件解析错误: {e}")
			raise ValueError(f"YAML 配置文件解析失败: {e}")
		if config is None:
			log.error(f"{config_path} 未找到配置信息")
			raise ValueError(f"{config_path} 未找到配置信息")
		if not isinstance(config, dict):
			raise ValueError(f"{config_path} 顶层必须是映射")
		return config
