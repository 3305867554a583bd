from .logger import ACTION_LOGGER, ActionLogHandler, attach_action_log, detach_action_log

__all__ = ["ACTION_LOGGER", "ActionLogHandler", "attach_action_log", "detach_action_log"]
