from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('simulate', 'Simulate'), ('percolate', 'Percolate'), ('fit', 'Fit'), ('calibrate', 'Calibrate'), ('collapse', 'Collapse')], max_length=16)),
                ('status', models.CharField(choices=[('QUEUED', 'Queued'), ('IN_PROGRESS', 'In Progress'), ('COMPLETED', 'Completed'), ('FAILED', 'Failed')], default='QUEUED', max_length=20)),
                ('config', models.JSONField()),
                ('config_sha256', models.CharField(db_index=True, max_length=64)),
                ('output_path', models.CharField(blank=True, default='', max_length=1024)),
                ('summary', models.JSONField(blank=True, null=True)),
                ('error', models.TextField(blank=True, default='')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'db_table': 'simulation_runs',
            },
        ),
        migrations.AddIndex(
            model_name='simulationrun',
            index=models.Index(fields=['status', 'created_at'], name='idx_run_status_created'),
        ),
    ]
