"""Test suite for telethon_fastapi application."""
