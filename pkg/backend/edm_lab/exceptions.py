"""Исключения проекта.

Библиотечные функции бросают только эти исключения; перевод в коды
выхода делает cli.utils.
"""


class EdmLabError(Exception):
    """Базовое исключение проекта."""


class InvalidParameterError(EdmLabError, ValueError):
    """Параметры вне допустимой области."""


class DegenerateSupportError(InvalidParameterError):
    """Носитель вырожден или не содержит 0 после центрирования."""


class InvalidMomentsError(InvalidParameterError):
    """Набор моментов нарушает m2 > 0, m4 >= m2^2 или m2 <= c^2."""


class UnboundedNodeCountError(InvalidParameterError):
    """N_min не ограничено (t = 1 или gamma = 0)."""


class ShapeMismatchError(InvalidParameterError):
    pass


class NumericalError(EdmLabError, ArithmeticError):
    """Сбой численного ядра."""


class NotSymmetricError(NumericalError):
    pass


class RankDeficiencyError(NumericalError):
    """Матрица X неполного столбцового ранга (вырожденное облако)."""


class RankBoundViolationError(NumericalError):
    """Эффективный ранг EDM больше d + 2."""


class SingularMomentMatrixError(NumericalError):
    """R_d численно вырождена."""


class ComplexRootsError(NumericalError):

    def __init__(self, message, discriminant):
        super().__init__(message)
        self.discriminant = discriminant


class ConvergenceError(NumericalError):

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class DivergenceError(ConvergenceError):
    """Невязка SVT расходится."""
