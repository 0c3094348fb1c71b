import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'trilie.settings')
django.setup()
