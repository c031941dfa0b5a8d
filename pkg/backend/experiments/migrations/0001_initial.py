# Generated by Django 4.2.16 on 2026-10-19 11:42

import django.core.validators
from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='MonteCarloRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('claim', models.CharField(max_length=32, verbose_name='Утверждение')),
                ('dist_id', models.CharField(max_length=128, verbose_name='Распределение')),
                ('dim', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(1)], verbose_name='Размерность d')),
                ('n_nodes', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(2)], verbose_name='Число узлов N')),
                ('trials', models.PositiveIntegerField(validators=[django.core.validators.MinValueValidator(1)], verbose_name='Число испытаний')),
                ('t', models.FloatField(verbose_name='Параметр t')),
                ('gamma', models.FloatField(verbose_name='Параметр gamma')),
                ('master_seed', models.CharField(max_length=20, verbose_name='Главный сид')),
                ('algorithm', models.CharField(max_length=32, verbose_name='Генератор')),
                ('failures', models.PositiveIntegerField(verbose_name='Нарушения')),
                ('errors', models.PositiveIntegerField(verbose_name='Ошибки ядра')),
                ('empirical_rate', models.FloatField(verbose_name='Эмпирическая частота')),
                ('bound', models.FloatField(verbose_name='Теоретическая оценка')),
                ('passed', models.BooleanField(verbose_name='Проверка пройдена')),
                ('created', models.DateTimeField(auto_now_add=True, verbose_name='Дата запуска')),
            ],
            options={
                'verbose_name': 'прогон Монте-Карло',
                'verbose_name_plural': 'Прогоны Монте-Карло',
                'ordering': ('-created',),
            },
        ),
        migrations.CreateModel(
            name='TrialRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('trial', models.PositiveIntegerField(verbose_name='Номер испытания')),
                ('seed', models.CharField(max_length=20, verbose_name='Сид')),
                ('mu_U', models.FloatField(null=True, verbose_name='mu(U)')),
                ('sigma_min_sq_A', models.FloatField(null=True, verbose_name='sigma_min^2(A)')),
                ('rank', models.PositiveIntegerField(null=True, verbose_name='Ранг')),
                ('failure', models.BooleanField(default=False, verbose_name='Нарушение')),
                ('error', models.TextField(blank=True, verbose_name='Ошибка')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='experiments.montecarlorun', verbose_name='Прогон')),
            ],
            options={
                'verbose_name': 'испытание',
                'verbose_name_plural': 'Испытания',
                'ordering': ('trial',),
            },
        ),
        migrations.AddConstraint(
            model_name='trialrecord',
            constraint=models.UniqueConstraint(fields=('run', 'trial'), name='unique_trial_in_run'),
        ),
    ]
