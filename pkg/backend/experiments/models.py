from django.core.validators import MinValueValidator
from django.db import models


class MonteCarloRun(models.Model):
    """Сохраненный прогон Монте-Карло (verify --save)"""
    claim = models.CharField(max_length=32, verbose_name='Утверждение')
    dist_id = models.CharField(max_length=128, verbose_name='Распределение')
    dim = models.PositiveIntegerField(validators=[MinValueValidator(1)],
                                      verbose_name='Размерность d')
    n_nodes = models.PositiveIntegerField(validators=[MinValueValidator(2)],
                                          verbose_name='Число узлов N')
    trials = models.PositiveIntegerField(validators=[MinValueValidator(1)],
                                         verbose_name='Число испытаний')
    t = models.FloatField(verbose_name='Параметр t')
    gamma = models.FloatField(verbose_name='Параметр gamma')
    # 64-битные сиды не помещаются в знаковый BigIntegerField.
    master_seed = models.CharField(max_length=20,
                                   verbose_name='Главный сид')
    algorithm = models.CharField(max_length=32,
                                 verbose_name='Генератор')
    failures = models.PositiveIntegerField(verbose_name='Нарушения')
    errors = models.PositiveIntegerField(verbose_name='Ошибки ядра')
    empirical_rate = models.FloatField(verbose_name='Эмпирическая частота')
    bound = models.FloatField(verbose_name='Теоретическая оценка')
    passed = models.BooleanField(verbose_name='Проверка пройдена')
    created = models.DateTimeField(auto_now_add=True,
                                   verbose_name='Дата запуска')

    def __str__(self):
        return f'{self.claim} {self.dist_id} N={self.n_nodes}'

    class Meta:
        verbose_name = 'прогон Монте-Карло'
        verbose_name_plural = 'Прогоны Монте-Карло'
        ordering = ('-created',)


class TrialRecord(models.Model):
    """Одно испытание прогона"""
    run = models.ForeignKey(MonteCarloRun, on_delete=models.CASCADE,
                            related_name='records',
                            verbose_name='Прогон')
    trial = models.PositiveIntegerField(verbose_name='Номер испытания')
    seed = models.CharField(max_length=20, verbose_name='Сид')
    mu_U = models.FloatField(null=True, verbose_name='mu(U)')
    sigma_min_sq_A = models.FloatField(null=True,
                                       verbose_name='sigma_min^2(A)')
    rank = models.PositiveIntegerField(null=True, verbose_name='Ранг')
    failure = models.BooleanField(default=False, verbose_name='Нарушение')
    error = models.TextField(blank=True, verbose_name='Ошибка')

    def __str__(self):
        return f'{self.run} #{self.trial}'

    class Meta:
        verbose_name = 'испытание'
        verbose_name_plural = 'Испытания'
        ordering = ('trial',)
        constraints = [
            models.UniqueConstraint(
                fields=['run', 'trial'],
                name='unique_trial_in_run'
            )
        ]
