# Generated by Django 5.2.9 on 2026-10-19 11:02

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('created_at', models.DateTimeField(auto_now_add=True, db_index=True)),
                ('scope', models.CharField(help_text='e.g. "crack primal j=1" or "all"', max_length=255)),
                ('golden_dir', models.CharField(max_length=512)),
                ('strict', models.BooleanField(default=False)),
                ('total', models.PositiveIntegerField()),
                ('matched', models.PositiveIntegerField()),
                ('mismatched', models.PositiveIntegerField()),
                ('excluded', models.PositiveIntegerField(default=0)),
                ('report', models.JSONField(blank=True, default=dict)),
            ],
            options={
                'verbose_name': 'Verification Run',
                'verbose_name_plural': 'Verification Runs',
                'db_table': 'verification_runs',
                'ordering': ['-created_at'],
            },
        ),
    ]
