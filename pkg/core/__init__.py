from .workbench import Workbench, workbench

__all__ = ['Workbench', 'workbench']
