# Generated by Django 5.2.9 on 2026-10-19 11:02

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ShadowRecord',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('geometry', models.CharField(choices=[('crack', 'Penny-shaped crack (opening 2π)'), ('vnotch90', '90° V-notch (opening 3π/2)')], max_length=20)),
                ('kind', models.CharField(choices=[('primal', 'Primal (exponent +α_j)'), ('dual', 'Dual (exponent −α_j)')], max_length=10)),
                ('j', models.PositiveIntegerField()),
                ('h', models.PositiveIntegerField()),
                ('f', models.PositiveIntegerField()),
                ('freq_den', models.PositiveSmallIntegerField()),
                ('terms', models.JSONField(default=list, help_text='[{"num": k, "sin": [a, b], "cos": [a, b]}, ...]')),
                ('dsl', models.TextField()),
                ('degenerate', models.BooleanField(default=False, help_text='Frequency coincided with a Neumann eigenvalue of the wedge')),
                ('kernel_dropped', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'verbose_name': 'Shadow Record',
                'verbose_name_plural': 'Shadow Records',
                'db_table': 'shadow_records',
                'ordering': ['geometry', 'kind', 'j', 'h', 'f'],
                'indexes': [models.Index(fields=['geometry', 'kind', 'j'], name='shadow_records_family_idx')],
                'unique_together': {('geometry', 'kind', 'j', 'h', 'f')},
            },
        ),
    ]
