from argparse import ArgumentParser, Namespace
from typing import Callable, List, Optional


class Command:
    def __init__(self, name: str, description: str, configure: Callable[[ArgumentParser], None],
                 function: Callable[[Namespace], Optional[dict]]):
        self.name = name
        self.description = description
        self.configure = configure
        self.function = function

    def execute(self, args: Namespace) -> Optional[dict]:
        """Run the command; returns a summary of what was written"""
        return self.function(args)


class CommandRegistry:
    """Central command registry - can be used as a singleton"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance.commands = {}
        return cls._instance

    @classmethod
    def get_instance(cls) -> 'CommandRegistry':
        """Get the global command registry instance"""
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def register_command(self, command: Command):
        self.commands[command.name] = command

    def get_command(self, name: str) -> Command:
        return self.commands.get(name)

    def command_names(self) -> List[str]:
        return list(self.commands)


# Global command registry instance
global_command_registry = CommandRegistry.get_instance()
