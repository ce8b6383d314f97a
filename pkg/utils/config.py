import os
import sys
import configparser

# 定义默认配置字典，用于初始化
DEFAULT_CONFIG = {
    "General": {
        "log_level": "INFO"
    },
    "Geometry": {
        "weights": "2, 2, 2, 2",
        "ordinary": ""
    },
    "Output": {
        "format": "text",
        "strict": "False"
    },
    "Selftest": {
        "max_rank": "6",
        "max_length": "12",
        "periods": "10",
        "cap_extra": "2"
    },
    "Server": {
        "host": "0.0.0.0",
        "port": "8000"
    }
}

class ConfigManager:
    '''
    ConfigManager 的 Docstring
    这是一个用于管理计算器配置的类，旨在让命令行、HTTP 接口和自检共享同一份 config.ini。
    主要功能包括：
    1. 自动检测配置文件路径，支持打包后的可执行文件和脚本运行环境。
    2. 加载配置文件，如果文件不存在则创建一个包含默认设置的配置文件。
    3. 提供便捷的方法获取不同类型的配置值（字符串、整数、布尔值和列表）。
    4. 把 [Geometry] 段渲染成命令行头部语法，命令行没有给出几何时使用。
    '''
    def __init__(self, config_filename='config.ini'):
        # 打包环境放在可执行文件旁边，脚本环境放在项目根目录 (utils 的上一级)
        if getattr(sys, 'frozen', False):
            base_path = os.path.dirname(sys.executable)
        else:
            base_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        
        self.config_path = os.path.join(base_path, config_filename)
        self.config = configparser.ConfigParser()
        self._load_config()

    def _load_config(self):
        """加载配置，如果文件不存在则创建默认配置"""
        if not os.path.exists(self.config_path):
            print(f"[提示] 配置文件 {self.config_path} 不存在，正在创建默认配置...", file=sys.stderr)
            self._create_default_config()
        
        # 读取文件，支持 UTF-8
        self.config.read(self.config_path, encoding='utf-8')

    def _create_default_config(self):
        """生成默认的 .ini 文件"""
        self.config.read_dict(DEFAULT_CONFIG)
        self._write()

    def _write(self):
        with open(self.config_path, 'w', encoding='utf-8') as configfile:
            self.config.write(configfile)

    def get(self, section, option, fallback=None):
        """获取字符串类型的配置"""
        return self.config.get(section, option, fallback=fallback)

    def get_int(self, section, option, fallback=0):
        """获取整数类型的配置"""
        return self.config.getint(section, option, fallback=fallback)

    def get_boolean(self, section, option, fallback=False):
        """获取布尔类型的配置"""
        return self.config.getboolean(section, option, fallback=fallback)

    def get_list(self, section, option, delimiter=','):
        """获取列表类型配置 (自动分割字符串)"""
        val = self.config.get(section, option, fallback="")
        return [x.strip() for x in val.split(delimiter) if x.strip()]

    def set_value(self, section, option, value):
        """修改一项配置并立即写回文件 (HTTP 接口使用)"""
        if not self.config.has_section(section):
            self.config.add_section(section)
        self.config.set(section, option, str(value))
        self._write()

    def geometry_header(self):
        """[Geometry] 段 → `weights=(2,2,2,2); ordinary=a,b`"""
        weights = ",".join(self.get_list("Geometry", "weights"))
        header = f"weights=({weights})"
        labels = self.get_list("Geometry", "ordinary")
        if labels:
            header += "; ordinary=" + ",".join(labels)
        return header

# 创建一个单例实例，方便在其他文件中直接导入使用
settings = ConfigManager()