from .study import LevelStudy, cauchy_study, hirano_diagnostic, weak_limit_check
