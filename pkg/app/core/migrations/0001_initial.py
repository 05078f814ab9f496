# Generated by Django 4.0.8 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='StoredMessage',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('platform', models.CharField(max_length=32)),
                ('channel_id', models.CharField(max_length=255)),
                ('native_id', models.CharField(max_length=255)),
                ('thread_id', models.CharField(blank=True, max_length=255)),
                ('userid', models.CharField(max_length=255)),
                ('username', models.CharField(max_length=255)),
                ('text', models.TextField(blank=True)),
                ('time_ms', models.BigIntegerField()),
                ('attachments', models.JSONField(blank=True, default=list)),
                ('optional_fields', models.JSONField(blank=True, default=dict)),
                ('raw', models.BinaryField(blank=True, default=b'')),
            ],
        ),
        migrations.AddConstraint(
            model_name='storedmessage',
            constraint=models.UniqueConstraint(fields=('platform', 'channel_id', 'native_id'), name='unique_message_id'),
        ),
    ]
